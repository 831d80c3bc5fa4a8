#pragma once

#include "votepower/core.hpp"
#include "votepower/engine.hpp"
#include "votepower/equity.hpp"
#include "votepower/graph.hpp"
#include "votepower/report.hpp"
#include "votepower/scenario.hpp"
