#include "prodcrit/cli/cli.hpp"

#include <charconv>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "prodcrit/cli/state_io.hpp"
#include "prodcrit/error.hpp"
#include "prodcrit/partitions.hpp"
#include "prodcrit/product.hpp"

namespace prodcrit::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string input_positional;
  std::string input;
  std::string output;
  std::string partition;
  std::string state;
  std::string dims;
  double tol = kDefaultRankTolerance;
  std::optional<double> p;
  std::optional<int> n;
  std::uint64_t seed = 0;
  bool json = false;
};

struct LoadedInput {
  std::string path;
  std::string digest;
  DensityMatrix rho;
};

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string out = format_double(z.real());
  if (!std::signbit(z.imag())) out += '+';
  return out + format_double(z.imag()) + "i";
}

void print_matrix(const ComplexMatrix& matrix, std::ostream& out, const std::string& indent = "") {
  for (Index i = 0; i < matrix.rows(); ++i) {
    out << indent;
    for (Index j = 0; j < matrix.cols(); ++j) out << (j > 0 ? " " : "") << format_complex(matrix(i, j));
    out << '\n';
  }
}

std::string format_values(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) out += (k > 0 ? " " : "") + format_double(values[k]);
  return out;
}

std::string format_blocks(const std::vector<Partition::Block>& blocks) {
  std::string out;
  for (std::size_t t = 0; t < blocks.size(); ++t) out += (t > 0 ? "|" : "") + format_block(blocks[t]);
  return out;
}

std::vector<Dims> parse_dim_groups(const std::string& text) {
  std::vector<Dims> groups(1);
  std::string token;
  auto flush = [&](std::size_t position) {
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || value <= 0) {
      throw UsageError("--dims: expected a positive integer at position " + std::to_string(position));
    }
    groups.back().push_back(value);
    token.clear();
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (c == ' ') continue;
    if (c == ',' || c == '|') {
      flush(k);
      if (c == '|') groups.emplace_back();
    } else {
      token += c;
    }
  }
  flush(text.size());
  return groups;
}

Dims flat_dims(const std::string& text) {
  if (text.empty()) throw UsageError("--dims is required for this state");
  Dims out;
  for (const Dims& group : parse_dim_groups(text)) out.insert(out.end(), group.begin(), group.end());
  return out;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw UsageError("--tol must lie in (0, 1)");
}

LoadedInput load_input(const Options& opts) {
  if (!opts.input.empty() && !opts.input_positional.empty() && opts.input != opts.input_positional) {
    throw UsageError("input given twice (positional and --input)");
  }
  const std::string path = opts.input.empty() ? opts.input_positional : opts.input;
  if (path.empty()) throw UsageError("an input state file is required");
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return {path, "sha256:" + sha256_hex(text), as_density(state_from_json(doc))};
}

Partition require_partition(const Options& opts, const DensityMatrix& rho) {
  if (opts.partition.empty()) throw UsageError("--partition is required");
  return parse_partition(opts.partition, rho.num_subsystems());
}

void merge(json& into, const json& from) {
  for (const auto& [key, value] : from.items()) into[key] = value;
}

json report_core(const ProductReport& report) {
  return json{{"partition", format_partition(report.partition)},
              {"verdict", report.is_product},
              {"rank", report.rank},
              {"ratio", report.ratio},
              {"singular_values", report.singular_values}};
}

json header(const std::string& command, const LoadedInput& input) {
  return json{{"command", command}, {"input", input.path}, {"input_digest", input.digest}};
}

void emit(const Options& opts, const json& doc, const std::string& human, std::ostream& out) {
  if (!opts.output.empty()) write_text_file(opts.output, dump(doc));
  out << (opts.json ? dump(doc) : human);
}

std::string human_report(const ProductReport& report) {
  std::ostringstream text;
  text << "partition: " << format_partition(report.partition) << '\n'
       << "tol: " << format_double(report.rel_tol) << '\n'
       << "singular_values: " << format_values(report.singular_values) << '\n'
       << "rank: " << report.rank << '\n'
       << "ratio: " << format_double(report.ratio) << '\n'
       << "verdict: " << (report.is_product ? "product" : "not product") << '\n';
  return text.str();
}

int cmd_gen(const Options& opts, std::ostream& out) {
  const std::string& name = opts.state;
  auto require_p = [&] {
    if (!opts.p) throw UsageError("state " + name + " needs --p");
    return *opts.p;
  };
  const int n = opts.n.value_or(3);

  StateValue state = [&]() -> StateValue {
    if (name == "example1") return gen_example1(require_p());
    if (name == "example2") return gen_example2();
    if (name == "w") return gen_w(n);
    if (name == "ghz") return gen_ghz(n);
    if (name == "bell") return gen_bell();
    if (name == "zero") return gen_basis_zero(opts.dims.empty() ? Dims(static_cast<std::size_t>(n), 2) : flat_dims(opts.dims));
    if (name == "mixed") return gen_maximally_mixed(flat_dims(opts.dims));
    if (name == "random") return gen_random_density(flat_dims(opts.dims), opts.seed);
    if (name == "random-pure") return gen_random_pure(flat_dims(opts.dims), opts.seed);
    if (name == "random-product") {
      if (opts.dims.empty()) throw UsageError("--dims is required for this state");
      return gen_random_product(parse_dim_groups(opts.dims), opts.seed);
    }
    throw UsageError("unknown state \"" + name +
                     "\" (known: example1, example2, w, ghz, bell, zero, mixed, random, random-pure, "
                     "random-product)");
  }();

  if (opts.output.empty()) {
    out << dump(state_to_json(state));
  } else {
    write_state_file(opts.output, state);
  }
  return kExitProduct;
}

std::vector<Partition::Block> require_bipartition_blocks(const Options& opts, const DensityMatrix& rho) {
  if (opts.partition.empty()) throw UsageError("--partition is required");
  auto blocks = parse_blocks(opts.partition, rho.num_subsystems());
  if (blocks.size() != 2) throw PartitionError("expected a bipartition with exactly two blocks");
  return blocks;
}

int cmd_realign(const Options& opts, std::ostream& out) {
  const LoadedInput input = load_input(opts);
  const auto blocks = require_bipartition_blocks(opts, input.rho);
  const BipartiteView view = bipartite_view(input.rho, std::span<const int>(blocks[0]));
  const ComplexMatrix realigned = realign(view.matrix, view.m, view.n);

  json doc = header("realign", input);
  doc["partition"] = format_blocks(blocks);
  doc["m"] = view.m;
  doc["n"] = view.n;
  doc["rows"] = realigned.rows();
  doc["cols"] = realigned.cols();
  doc["matrix"] = matrix_to_json(realigned);
  std::ostringstream human;
  print_matrix(realigned, human);
  emit(opts, doc, human.str(), out);
  return kExitProduct;
}

int cmd_svals(const Options& opts, std::ostream& out) {
  const LoadedInput input = load_input(opts);
  check_tolerance(opts.tol);
  const auto blocks = require_bipartition_blocks(opts, input.rho);
  const BipartiteView view = bipartite_view(input.rho, std::span<const int>(blocks[0]));
  const RealVector sigmas = svd(realign(view.matrix, view.m, view.n)).singular_values;
  const std::vector<double> values(sigmas.data(), sigmas.data() + sigmas.size());

  json doc = header("svals", input);
  doc["partition"] = format_blocks(blocks);
  doc["tol"] = opts.tol;
  doc["rank"] = numerical_rank(sigmas, opts.tol);
  doc["singular_values"] = values;
  std::string human;
  for (double v : values) human += format_double(v) + "\n";
  emit(opts, doc, human, out);
  return kExitProduct;
}

int cmd_test(const Options& opts, std::ostream& out) {
  const LoadedInput input = load_input(opts);
  check_tolerance(opts.tol);
  const Partition partition = require_partition(opts, input.rho);
  if (partition.size() < 2) throw PartitionError("partition must have at least two blocks");

  json doc = header("test", input);
  doc["tol"] = opts.tol;
  if (partition.size() == 2) {
    const ProductReport report = is_product_bipartition(input.rho, partition, opts.tol);
    merge(doc, report_core(report));
    emit(opts, doc, human_report(report), out);
    return report.is_product ? kExitProduct : kExitNotProduct;
  }

  const KProductResult result = is_k_product(input.rho, partition, opts.tol);
  doc["partition"] = format_partition(partition);
  doc["verdict"] = result.is_k_product;
  doc["coarse_dims"] = result.coarse_dims;
  json splits = json::array();
  std::ostringstream human;
  human << "partition: " << format_partition(partition) << '\n' << "tol: " << format_double(opts.tol) << '\n';
  for (std::size_t t = 0; t < result.reports.size(); ++t) {
    const ProductReport& report = result.reports[t];
    splits.push_back(report_core(report));
    human << "block " << format_block(partition.block(t)) << " vs rest: rank " << report.rank << ", ratio "
          << format_double(report.ratio) << (report.is_product ? ", product" : ", not product") << '\n';
  }
  doc["splits"] = std::move(splits);
  human << "verdict: " << (result.is_k_product ? "product" : "not product") << '\n';
  emit(opts, doc, human.str(), out);
  return result.is_k_product ? kExitProduct : kExitNotProduct;
}

int cmd_factorize(const Options& opts, std::ostream& out) {
  const LoadedInput input = load_input(opts);
  check_tolerance(opts.tol);
  const Partition partition = require_partition(opts, input.rho);
  if (partition.size() != 2) throw PartitionError("factorize expects a bipartition with exactly two blocks");
  const ProductReport report = factorize_bipartition(input.rho, partition, opts.tol);

  json doc = header("factorize", input);
  doc["tol"] = opts.tol;
  merge(doc, report_core(report));
  std::string human = human_report(report);
  if (report.factors) {
    const double error = relative_frobenius_error(reconstruct(partition, *report.factors), input.rho.matrix());
    json factors = json::array();
    std::ostringstream text;
    for (std::size_t t = 0; t < report.factors->size(); ++t) {
      const DensityMatrix& factor = (*report.factors)[t];
      json entry = json{{"subsystems", partition.block(t)}};
      merge(entry, state_to_json(factor));
      factors.push_back(std::move(entry));
      text << "factor " << format_block(partition.block(t)) << ":\n";
      print_matrix(factor.matrix(), text, "  ");
    }
    doc["factor_adjustment"] = report.factor_adjustment;
    doc["reconstruction_error"] = error;
    doc["factors"] = std::move(factors);
    text << "reconstruction_error: " << format_double(error) << '\n';
    human += text.str();
  }
  emit(opts, doc, human, out);
  return report.is_product ? kExitProduct : kExitNotProduct;
}

int cmd_analyze(const Options& opts, std::ostream& out) {
  const LoadedInput input = load_input(opts);
  check_tolerance(opts.tol);
  const FactorizationTree tree = finest_product_partition(input.rho, opts.tol);
  const double error = relative_frobenius_error(reconstruct(tree.partition, tree.factors), input.rho.matrix());

  json doc = header("analyze", input);
  doc["tol"] = opts.tol;
  doc["finest_partition"] = format_partition(tree.partition);
  doc["reconstruction_error"] = error;
  json splits = json::array();
  for (const SplitRecord& split : tree.splits) {
    json entry = json{{"subsystems", split.labels}};
    merge(entry, report_core(split.report));
    splits.push_back(std::move(entry));
  }
  doc["splits"] = std::move(splits);
  json factors = json::array();
  for (std::size_t t = 0; t < tree.factors.size(); ++t) {
    json entry = json{{"subsystems", tree.partition.block(t)}};
    merge(entry, state_to_json(tree.factors[t]));
    factors.push_back(std::move(entry));
  }
  doc["factors"] = std::move(factors);
  emit(opts, doc, format_partition(tree.partition) + "\n", out);
  return kExitProduct;
}

void add_input_options(CLI::App& sub, Options& opts) {
  sub.add_option("state_file", opts.input_positional, "State file (same as --input)");
  sub.add_option("-i,--input", opts.input, "State file");
  sub.add_option("-o,--output", opts.output, "Also write the JSON report to this path");
  sub.add_flag("--json", opts.json, "Print the machine-readable report");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Product-state tests via the rank of the realigned density matrix", "prodcrit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Write a named or random state file");
  gen->add_option("--state", opts.state, "example1, example2, w, ghz, bell, zero, mixed, random, random-pure, random-product")
      ->required();
  gen->add_option("--p", opts.p, "Mixing parameter of example1, in [0, 1]");
  gen->add_option("--n", opts.n, "Number of qubits for w, ghz, zero (default 3)");
  gen->add_option("--dims", opts.dims, "Subsystem dims, e.g. 2,2,3; random-product groups with '|', e.g. 2,2|3");
  gen->add_option("--seed", opts.seed, "Seed for random states");
  gen->add_option("-o,--output", opts.output, "Output path (stdout when omitted)");

  auto* realign_cmd = app.add_subcommand("realign", "Print the realigned matrix for a bipartition");
  auto* svals = app.add_subcommand("svals", "Print singular values of the realigned matrix");
  auto* test = app.add_subcommand("test", "Product test across a bipartition or k-partition");
  auto* factorize = app.add_subcommand("factorize", "Product test plus factor extraction");
  auto* analyze = app.add_subcommand("analyze", "Find the finest product partition");
  for (auto* sub : {realign_cmd, svals, test, factorize}) {
    add_input_options(*sub, opts);
    sub->add_option("-P,--partition", opts.partition, "Partition, e.g. \"1|2,3\"");
  }
  add_input_options(*analyze, opts);
  for (auto* sub : {svals, test, factorize, analyze}) {
    sub->add_option("--tol", opts.tol, "Relative rank tolerance (default 1e-8)");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitProduct : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(opts, out);
    if (realign_cmd->parsed()) return cmd_realign(opts, out);
    if (svals->parsed()) return cmd_svals(opts, out);
    if (test->parsed()) return cmd_test(opts, out);
    if (factorize->parsed()) return cmd_factorize(opts, out);
    if (analyze->parsed()) return cmd_analyze(opts, out);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace prodcrit::cli
