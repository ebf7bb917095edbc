#pragma once

#include "vemser/dofsets.hpp"
#include "vemser/serendipity.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vemser {

/// Everything a command needs besides the element.
struct RunConfig {
  FamilySpec spec;
  std::optional<Strategy> strategy; ///< default_strategy(element) when unset
  std::optional<SpaceName> s_space; ///< default_s_space(spec) when unset
  ReductionOptions opt;
  unsigned seed = 0;
  int samples = 20; ///< random inputs per randomized check
};

/// Exit status of a command: 0 success, 2 validation error, 3 invariant failure.
enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitInvariant = 3 };

struct Report {
  nlohmann::json json;
  std::string text;
  int status = kExitOk;
};

/// Classical finite element counterpart and its dimension, counted from an
/// enumerated basis.
struct FemRow {
  std::string name;
  int dim = 0;
};

/// Counterparts on triangles, quadrilaterals, tetrahedra and hexahedra;
/// empty for other elements.
std::vector<FemRow> fem_comparison(const Element &e, const FamilySpec &spec);

/// Preserved space of a run as an orthonormal basis.
SpaceBasis run_s_basis(const RunConfig &cfg, const MomentCache &mc);

/// The label is echoed in the report (usually the element file name).
Report cmd_dims(const Element &e, const std::string &label, const RunConfig &cfg);
Report cmd_reduce(const Element &e, const std::string &label, const RunConfig &cfg);
Report cmd_verify(const Element &e, const std::string &label, const RunConfig &cfg);
Report cmd_zspace(const Element &e, const std::string &label, const RunConfig &cfg);

/// Text table with columns padded to their widest cell.
std::string format_table(const std::vector<std::vector<std::string>> &rows);

} // namespace vemser
