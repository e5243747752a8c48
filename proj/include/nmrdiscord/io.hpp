#pragma once

#include <string>

#include "json.hpp"
#include "nmrdiscord/matcore.hpp"
#include "nmrdiscord/relaxmodel.hpp"

namespace nmrdiscord {

inline constexpr double kStateFileTol = 1e-6;

/// JSON container for a two-qubit density matrix:
///   {"dims": 4, "re": [[4 x 4]], "im": [[4 x 4]], "metadata": {...}}
struct StateFile {
  ComplexMatrix matrix = ComplexMatrix::Zero(4, 4);
  nlohmann::json metadata = nlohmann::json::object();
};

/// Structural decoding only. Throws ParseError naming the field path, e.g. "re[2][3]".
StateFile state_file_from_json(const nlohmann::json& j);
nlohmann::json state_file_to_json(const StateFile& f);

StateFile read_state_file(const std::string& path);
void write_state_file(const std::string& path, const StateFile& f);

/// Decodes and validates the matrix (default tolerance 1e-6, tomography grade).
DensityMatrix load_state(const std::string& path, double tol = kStateFileTol);

/// CSV with header `t_seconds,value`; '#' lines are comments.
FidelitySeries parse_fidelity_csv(const std::string& text, SeriesKind kind);
FidelitySeries read_fidelity_csv(const std::string& path, SeriesKind kind);
std::string format_fidelity_csv(const FidelitySeries& s);

std::string read_text_file(const std::string& path);

}  // namespace nmrdiscord
