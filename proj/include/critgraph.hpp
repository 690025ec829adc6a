#pragma once

#include "critgraph/assignment.hpp"
#include "critgraph/canonical.hpp"
#include "critgraph/classify.hpp"
#include "critgraph/clique.hpp"
#include "critgraph/coloring.hpp"
#include "critgraph/critical.hpp"
#include "critgraph/dense.hpp"
#include "critgraph/density.hpp"
#include "critgraph/discharge.hpp"
#include "critgraph/graph.hpp"
#include "critgraph/io.hpp"
#include "critgraph/matching.hpp"
#include "critgraph/numeric.hpp"
#include "critgraph/params.hpp"
#include "critgraph/rng.hpp"
#include "critgraph/sampler.hpp"
#include "critgraph/structure.hpp"

namespace critgraph {

inline constexpr const char* version = "0.1.0";
inline constexpr int report_schema = 1;

}  // namespace critgraph
