#pragma once

#include "noonsim/errors.hpp"
#include "noonsim/state_core.hpp"
#include "noonsim/metrology.hpp"
#include "noonsim/estimation.hpp"
#include "noonsim/rosetta.hpp"
#include "noonsim/lithography.hpp"
#include "noonsim/io.hpp"
#include "noonsim/experiments.hpp"
