#pragma once

#include "nestmc/diagnostics.hpp"
#include "nestmc/election.hpp"
#include "nestmc/enumerate.hpp"
#include "nestmc/error.hpp"
#include "nestmc/graph.hpp"
#include "nestmc/recom.hpp"
#include "nestmc/rng.hpp"
#include "nestmc/seed.hpp"
#include "nestmc/shortburst.hpp"
#include "nestmc/swap.hpp"
