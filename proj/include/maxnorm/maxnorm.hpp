#pragma once

#include "maxnorm/common.hpp"
#include "maxnorm/quadrature.hpp"
#include "maxnorm/sampled_curve.hpp"
#include "maxnorm/polynomial.hpp"
#include "maxnorm/profile.hpp"
#include "maxnorm/transform.hpp"
#include "maxnorm/positivity.hpp"
#include "maxnorm/membership.hpp"
#include "maxnorm/splines.hpp"
#include "maxnorm/dimwalk.hpp"
#include "maxnorm/summability.hpp"
#include "maxnorm/json_io.hpp"
#include "maxnorm/acceptance.hpp"
