#pragma once

#include <string>

#include <json.hpp>

#include "phe/estimation.hpp"
#include "phe/oracles.hpp"
#include "phe/partition.hpp"
#include "phe/selection.hpp"

namespace phe {

using Json = nlohmann::ordered_json;

// Partitions. Formats are stable and golden-file tested:
//   interval: {"kind":"interval","breakpoints":[{"num":..,"level":..},..]}
//   cube:     {"kind":"cube","k":..,"cells":[{"outer":[level,idx..],"holes":[..]},..]}
//   vector:   {"kind":"vector","n":..,"blocks":[[..],..]}
//   tree:     {"kind":"tree","k":..,"nodes":[..nested arrays, leaf = 0..]}
Json to_json(const IntervalPartition& m);
Json to_json(const CubePartition& m);
Json to_json(const VectorPartition& m);
Json to_json(const TreePartition& m);

IntervalPartition interval_partition_from_json(const nlohmann::json& j);
CubePartition cube_partition_from_json(const nlohmann::json& j);
VectorPartition vector_partition_from_json(const nlohmann::json& j);
TreePartition tree_partition_from_json(const nlohmann::json& j);

template <typename P>
Json to_json(const Histogram<P>& h) {
    Json j;
    j["partition"] = to_json(h.partition);
    j["levels"] = h.levels;
    return j;
}

Histogram<IntervalPartition> interval_histogram_from_json(const nlohmann::json& j);

Json to_json(const SelectionSummary& s);
Json to_json(const RiskEstimate& r);
Json to_json(const TailCheck& t);
Json to_json(const OracleVerdict& v);

/// Step-function plot data: one "x,y" row per edge, duplicated per cell so
/// the polyline renders as a staircase.
std::string step_csv(const Histogram<IntervalPartition>& h);

std::string tail_check_csv(const TailCheck& t);

/// Shortest round-trip decimal rendering, for deterministic CSV output.
std::string format_double(double v);

}  // namespace phe
