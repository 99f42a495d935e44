#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fanolab/instances.hpp"
#include "fanolab/lattice.hpp"
#include "json.hpp"

namespace fanolab {

using Json = nlohmann::ordered_json;

struct PipelineConfig {
    std::string command;
    std::string instance_path;
    std::string poly_text;  // inline polynomial for classify
    std::vector<std::string> poly_vars{"x0", "x1", "x2", "x3", "x4", "x5"};
    int i = 0;  // 2/3/4 to sample inline; 0 = all rows where applicable
    uint64_t seed = 1;
    int jet_order = 8;
    std::vector<uint32_t> primes{5, 7};
    std::string format = "json";
    int equiv_count = 50;
    int threads = 1;

    void validate() const;
};

struct CmdResult {
    int exit_code = 0;
    Json report;
};

Json instance_to_json(const SampledInstance& inst);

struct LoadedInstance {
    CubicThreefold cubic;
    std::string claimed_type;
    uint64_t seed = 0;
    std::optional<ConicPlane> conic;
};

LoadedInstance instance_from_json(const Json& j);
LoadedInstance load_instance(const PipelineConfig& cfg);  // from path or sampled from (i, seed)

Json type_to_json(const SingularityType& t);

// lattice and isometry file formats
Json lattice_to_json(const IntegralLattice& l);
IntegralLattice lattice_from_json(const Json& j);
Isometry isometry_from_json(const IntegralLattice& l, const Json& j);  // validates claimed_order

CmdResult cmd_classify(const PipelineConfig& cfg);
CmdResult cmd_gamma(const PipelineConfig& cfg);
CmdResult cmd_plane_check(const PipelineConfig& cfg);
CmdResult cmd_equivariance(const PipelineConfig& cfg);
CmdResult cmd_lattice_table(const PipelineConfig& cfg);
CmdResult cmd_wall(const PipelineConfig& cfg);
CmdResult cmd_sample(const PipelineConfig& cfg);
CmdResult cmd_report_all(const PipelineConfig& cfg);

std::string render_markdown(const Json& report);

// strip volatile fields (timings) for determinism comparisons
Json report_without_timings(Json report);

}  // namespace fanolab
