#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "liesym/functions.hpp"
#include "liesym/pdesys.hpp"

namespace liesym {

using json = nlohmann::json;

// {"time": "t", "vars": ["x","v"], "params": {"c0": "1/2"},
//  "basis": [{"components": ["v", "..."]}, ...],
//  "coeffs": ["@eta(t)", "0", "1"], "gauge_b0": "0",
//  "tensor": [[1,2,1,"1"], ...], "sample_box": [[lo,hi], ...]}
// Each basis entry may also carry its own "vars". Malformed input raises
// ParseError.
LieSystemDef system_from_json(const json& j, const FunctionRegistry& registry = FunctionRegistry::builtin());

// As above with "times": ["t1","t2"], "coeffs" as one row per basis field
// and an optional "time_box".
PDELieSystemDef pde_from_json(const json& j, const FunctionRegistry& registry = FunctionRegistry::builtin());

// {"waypoints": [[0,0],[1,0],[1,1]], "steps": 200}
TimePath path_from_json(const json& j);

json parse_json_text(const std::string& text);
json read_json_file(const std::string& path);

// [[a,b,g,"p/q"], ...], 1-based, only a < b and nonzero entries.
json tensor_to_json(const StructureTensor& c);
StructureTensor tensor_from_json(const json& j, std::size_t r);

json system_to_json(const LieSystemDef& sys);

// %.17g, the single number format used by every report and CSV.
std::string fmt(double v);

// "# liesym-csv v1" then "t,<columns>,err_est".
void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& columns);
std::string gnuplot_script(const std::string& csv_path, const std::vector<std::string>& columns);

}  // namespace liesym
