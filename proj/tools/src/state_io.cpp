#include "prodcrit/cli/state_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace prodcrit::cli {

namespace {

using json = nlohmann::ordered_json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& pair, const std::string& where) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    throw ValidationError("state file: " + where + " must be a [re, im] pair of numbers");
  }
  return {pair[0].get<double>(), pair[1].get<double>()};
}

json dims_to_json(const Dims& dims) {
  json out = json::array();
  for (Index d : dims) out.push_back(d);
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& matrix) {
  json rows = json::array();
  for (Index i = 0; i < matrix.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < matrix.cols(); ++j) row.push_back(complex_to_json(matrix(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json state_to_json(const DensityMatrix& rho) {
  return json{{"dims", dims_to_json(rho.dims())}, {"kind", "density"}, {"data", matrix_to_json(rho.matrix())}};
}

json state_to_json(const PureState& psi) {
  json data = json::array();
  for (Index i = 0; i < psi.amplitudes().size(); ++i) data.push_back(complex_to_json(psi.amplitudes()(i)));
  return json{{"dims", dims_to_json(psi.dims())}, {"kind", "pure"}, {"data", std::move(data)}};
}

json state_to_json(const StateValue& state) {
  return std::visit([](const auto& s) { return state_to_json(s); }, state);
}

StateValue state_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("state file: top level must be an object");
  for (const char* key : {"dims", "kind", "data"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("state file: missing \"") + key + "\"");
  }
  const json& dims_json = doc["dims"];
  if (!dims_json.is_array() || dims_json.empty()) throw ValidationError("state file: \"dims\" must be a nonempty array");
  Dims dims;
  for (const json& d : dims_json) {
    if (!d.is_number_integer() || d.get<long long>() <= 0) {
      throw ValidationError("state file: dims must be positive integers");
    }
    dims.push_back(d.get<Index>());
  }
  const Index side = total_dimension(dims);
  if (!doc["kind"].is_string()) throw ValidationError("state file: \"kind\" must be a string");
  const std::string kind = doc["kind"].get<std::string>();
  const json& data = doc["data"];
  if (!data.is_array() || static_cast<Index>(data.size()) != side) {
    throw ValidationError("state file: \"data\" must have " + std::to_string(side) + " entries");
  }

  if (kind == "density") {
    ComplexMatrix matrix(side, side);
    for (Index i = 0; i < side; ++i) {
      const json& row = data[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != side) {
        throw ValidationError("state file: row " + std::to_string(i + 1) + " must have " + std::to_string(side) +
                              " entries");
      }
      for (Index j = 0; j < side; ++j) {
        matrix(i, j) = complex_from_json(row[static_cast<std::size_t>(j)],
                                         "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    }
    return DensityMatrix::from_matrix(std::move(dims), std::move(matrix));
  }
  if (kind == "pure") {
    ComplexVector amplitudes(side);
    for (Index i = 0; i < side; ++i) {
      amplitudes(i) = complex_from_json(data[static_cast<std::size_t>(i)], "amplitude " + std::to_string(i + 1));
    }
    return PureState::from_amplitudes(std::move(dims), std::move(amplitudes));
  }
  throw ValidationError("state file: unknown kind \"" + kind + "\" (expected \"density\" or \"pure\")");
}

DensityMatrix as_density(const StateValue& state) {
  if (const auto* psi = std::get_if<PureState>(&state)) return density_from_pure(*psi);
  return std::get<DensityMatrix>(state);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

StateValue read_state_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return state_from_json(doc);
}

void write_state_file(const std::filesystem::path& path, const StateValue& state) {
  write_text_file(path, dump(state_to_json(state)));
}

namespace {

// Nesting depth of arrays of scalars; objects count as unbounded.
int array_depth(const json& value) {
  if (value.is_object()) return 1 << 20;
  if (!value.is_array()) return 0;
  int deepest = 0;
  for (const json& element : value) deepest = std::max(deepest, array_depth(element));
  return deepest + 1;
}

// Objects one key per line, matrices one row per line, short arrays inline.
void pretty(const json& value, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  if (value.is_object() && !value.empty()) {
    out += "{\n";
    std::size_t k = 0;
    for (auto it = value.begin(); it != value.end(); ++it, ++k) {
      out += inner + json(it.key()).dump() + ": ";
      pretty(it.value(), indent + 2, out);
      out += k + 1 < value.size() ? ",\n" : "\n";
    }
    out += pad + "}";
  } else if (value.is_array() && !value.empty() && array_depth(value) > 2) {
    out += "[\n";
    for (std::size_t k = 0; k < value.size(); ++k) {
      out += inner;
      pretty(value[k], indent + 2, out);
      out += k + 1 < value.size() ? ",\n" : "\n";
    }
    out += pad + "]";
  } else {
    out += value.dump();
  }
}

}  // namespace

std::string dump(const json& doc) {
  std::string out;
  pretty(doc, 0, out);
  out += "\n";
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < length; ++k) {
    out += kHex[digest[k] >> 4];
    out += kHex[digest[k] & 0xf];
  }
  return out;
}

}  // namespace prodcrit::cli
