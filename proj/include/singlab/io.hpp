#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "singlab/analysis.hpp"
#include "singlab/continuation.hpp"
#include "singlab/radial.hpp"
#include "singlab/solver.hpp"
#include "singlab/stability.hpp"

namespace singlab {

using Json = nlohmann::ordered_json;

Json to_json(const SolveReport& r, const Field& boundary);
/// delta is the inner radius of an annulus grid, 0 otherwise.
Json to_json(const SpectralReport& r);
Json to_json(const Check& c);
Json to_json(const EstimateReport& r);
Json to_json(const BifurcationConstants& b);
Json to_json(const ContinuationTrace& t);
Json to_json(const SequenceEntry& e);

/// One row per check: check_name,params,value,bound,relation,pass,applicable.
/// params are key=value pairs joined by ';'.
std::string estimates_csv(const EstimateReport& r);
/// t,boundary_level,min_u,lambda_min,iters,residual,status
std::string trace_csv(const ContinuationTrace& t);
/// '#'-prefixed grid header, then coords...,value.
std::string field_csv(const Field& u);
/// eps,r,u,du
std::string profiles_csv(const std::vector<RadialProfile>& profiles);
/// eps,S
std::string scan_csv(const ShootingScan& scan);
/// target,achieved,min_u,t,boundary_level,cone_distance,obstruction
std::string sequence_csv(const std::vector<SequenceEntry>& seq);

enum class PlotKind { scan, trace, profiles };

/// gnuplot script reading `data` (a CSV written by the matching function
/// above), written next to it as `script`.  Returns the script text.
std::string emit_plots(PlotKind kind, const std::filesystem::path& data, const std::filesystem::path& script);

}  // namespace singlab
