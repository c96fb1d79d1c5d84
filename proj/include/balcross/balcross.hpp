// balcross.hpp - umbrella header.

#pragma once

#include "balcross/bits.hpp"
#include "balcross/boolfn.hpp"
#include "balcross/encodings.hpp"
#include "balcross/engine.hpp"
#include "balcross/experiment.hpp"
#include "balcross/oa.hpp"
#include "balcross/operators.hpp"
#include "balcross/random.hpp"
#include "balcross/stats.hpp"
