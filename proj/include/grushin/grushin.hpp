#pragma once

// Umbrella header.
#include "grushin/analysis.hpp"
#include "grushin/bounds.hpp"
#include "grushin/catalog.hpp"
#include "grushin/coefficient.hpp"
#include "grushin/config.hpp"
#include "grushin/experiment.hpp"
#include "grushin/field.hpp"
#include "grushin/geometry.hpp"
#include "grushin/linsolve.hpp"
#include "grushin/operator.hpp"
#include "grushin/report_io.hpp"
#include "grushin/semilinear.hpp"
