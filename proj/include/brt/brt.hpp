#pragma once

#include "brt/error.hpp"
#include "brt/structures.hpp"
#include "brt/valuation.hpp"
#include "brt/trees.hpp"
#include "brt/envelopes.hpp"
#include "brt/reductions.hpp"
#include "brt/adversarial.hpp"
