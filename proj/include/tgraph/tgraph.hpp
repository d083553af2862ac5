#pragma once

#include "tgraph/bit_matrix.hpp"
#include "tgraph/branching.hpp"
#include "tgraph/clique.hpp"
#include "tgraph/errors.hpp"
#include "tgraph/experiment.hpp"
#include "tgraph/graph_io.hpp"
#include "tgraph/reachability.hpp"
#include "tgraph/rng.hpp"
#include "tgraph/stats.hpp"
#include "tgraph/temporal_graph.hpp"
