#pragma once

// ReLU network calculus: explicit approximator constructions with certified
// closed-form bounds, exact affine-piece tracing along lines, and
// shallow-incapacity certificates.

#include "relucalc/analysis.hpp"
#include "relucalc/bounds.hpp"
#include "relucalc/calculus.hpp"
#include "relucalc/constructors.hpp"
#include "relucalc/core.hpp"
#include "relucalc/io.hpp"
#include "relucalc/periodic.hpp"
#include "relucalc/sampling.hpp"
#include "relucalc/targets.hpp"
#include "relucalc/trace.hpp"
#include "relucalc/transforms.hpp"
