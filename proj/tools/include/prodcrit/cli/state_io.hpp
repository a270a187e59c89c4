#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"

#include "prodcrit/error.hpp"
#include "prodcrit/states.hpp"

namespace prodcrit::cli {

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// In-memory form of a state file:
///
///   {"dims": [2, 2], "kind": "density", "data": [[[re, im], ...], ...]}   (D rows, row-major)
///   {"dims": [2, 2], "kind": "pure",    "data": [[re, im], ...]}          (D amplitudes)
using StateValue = std::variant<DensityMatrix, PureState>;

nlohmann::ordered_json state_to_json(const DensityMatrix& rho);
nlohmann::ordered_json state_to_json(const PureState& psi);
nlohmann::ordered_json state_to_json(const StateValue& state);

/// Throws ValidationError on schema violations or invalid states.
StateValue state_from_json(const nlohmann::ordered_json& doc);

/// Pure states are promoted to |psi><psi|.
DensityMatrix as_density(const StateValue& state);

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& matrix);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

StateValue read_state_file(const std::filesystem::path& path);
void write_state_file(const std::filesystem::path& path, const StateValue& state);

/// Pretty-printed JSON with a trailing newline; doubles use the shortest
/// representation that parses back to the same bits.
std::string dump(const nlohmann::ordered_json& doc);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace prodcrit::cli
