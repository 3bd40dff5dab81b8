#pragma once

#include "cvbell/bell.hpp"
#include "cvbell/binning.hpp"
#include "cvbell/catstates.hpp"
#include "cvbell/error.hpp"
#include "cvbell/fock.hpp"
#include "cvbell/hermite.hpp"
#include "cvbell/optimize.hpp"
#include "cvbell/prepsim.hpp"
#include "cvbell/quadrature.hpp"
#include "cvbell/reference.hpp"
#include "cvbell/wavefunc.hpp"
