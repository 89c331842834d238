#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdmix/augment.hpp"
#include "spdmix/bench.hpp"
#include "spdmix/dataio.hpp"
#include "spdmix/error.hpp"
#include "spdmix/generators.hpp"
#include "spdmix/metrics.hpp"
#include "spdmix/regress.hpp"
#include "spdmix/spdness.hpp"

namespace spdmix::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> values;
  std::string_view rest = text;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    std::string_view token = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    T value{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw UsageError(std::string(flag) + ": cannot parse '" + std::string(token) + "'");
    }
    values.push_back(value);
  }
  if (values.empty()) throw UsageError(std::string(flag) + ": empty list");
  return values;
}

// key=value lines from a config file, turned into "--key=value" arguments.
std::vector<std::string> config_arguments(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(FormatError::Kind::kIo, "cannot open config file " + path.string());
  std::vector<std::string> args;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto strip = [](std::string s) {
      const std::size_t b = s.find_first_not_of(" \t");
      const std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": invalid key '" + key +
                       "'");
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

// Places config-file arguments right after the subcommand so that explicit
// flags, which come later, take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> config;
  std::vector<std::string> kept;
  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    if (a == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config needs a path");
      config = args[++k];
    } else if (a.rfind("--config=", 0) == 0) {
      config = a.substr(9);
    } else {
      kept.push_back(a);
    }
  }
  if (!config || kept.empty()) return kept;
  std::vector<std::string> merged;
  merged.push_back(kept.front());
  for (std::string& c : config_arguments(*config)) merged.push_back(std::move(c));
  merged.insert(merged.end(), kept.begin() + 1, kept.end());
  return merged;
}

std::string join_label(const Label& y) {
  std::string s;
  for (Index k = 0; k < y.size(); ++k) {
    if (k > 0) s += ';';
    s += format_double(y(k));
  }
  return s;
}

double hard_label(const Label& y, Task task) {
  if (task == Task::kRegression) return y(0);
  Index best = 0;
  y.maxCoeff(&best);
  return static_cast<double>(best);
}

bool preserves_unit_diagonal(Strategy s) {
  return s != Strategy::kRMixup && s != Strategy::kDropNode;
}

fs::path provenance_path(const fs::path& output) {
  fs::path p = output;
  p.replace_filename(output.stem().string() + ".provenance.csv");
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError(FormatError::Kind::kIo, "cannot open for writing " + path.string());
  f << text;
  f.flush();
  if (!f) throw FormatError(FormatError::Kind::kIo, "write failed: " + path.string());
}

// CSV to the output file when given, otherwise to `out`; returns whether the
// report went to a file.
bool emit_csv(const std::string& csv, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << csv;
    return false;
  }
  write_text(output, csv);
  return true;
}

double median_pairwise_distance(const LabeledDataset& ds, std::size_t limit) {
  const std::size_t m = std::min(ds.size(), limit);
  std::vector<Matrix> logs;
  logs.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    logs.push_back(matrix_log(SpdMatrix::from(ds.matrices[k])).matrix());
  }
  std::vector<double> d;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) d.push_back((logs[a] - logs[b]).norm());
  }
  if (d.empty()) return 1.0;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
  const double med = d[d.size() / 2];
  return med > 0.0 ? med : 1.0;
}

SeriesLayout parse_layout(const std::string& s) {
  if (s == "vars-as-rows") return SeriesLayout::kVarsAsRows;
  if (s == "vars-as-cols") return SeriesLayout::kVarsAsCols;
  throw UsageError("--series-layout must be vars-as-rows or vars-as-cols");
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind = "log-linear";
  Index n = 8;
  std::size_t count = 100;
  Index t = 0;
  Index rank = 0;
  double noise = 0.0;
  std::string task = "regression";
  int classes = 2;
  double condition = 100.0;
  double spread = 0.1;
  std::uint64_t seed = 0;
  std::string output;
  std::string layout = "vars-as-rows";
  bool header = false;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const SeriesLayout layout = parse_layout(a.layout);
  if (a.task != "regression" && a.task != "classification") {
    throw UsageError("--task must be regression or classification");
  }
  const Task task = a.task == "regression" ? Task::kRegression : Task::kClassification;
  if (a.n < 1) throw UsageError("--n must be >= 1");
  Rng rng(a.seed);
  json summary = {{"command", "gen"}, {"kind", a.kind}, {"n", a.n}, {"seed", a.seed},
                  {"output", a.output}};

  if (a.kind == "series") {
    if (a.t < 1) throw UsageError("--t must be >= 1 for series");
    const Index rank = a.rank > 0 ? a.rank : a.n;
    const SeriesMatrix s = gen_synthetic_series(a.n, a.t, rank, a.noise, rng);
    write_series_csv(a.output, s, layout, a.header);
    summary["t"] = a.t;
    summary["rank"] = rank;
    out << summary.dump() << '\n';
    return kExitOk;
  }

  LabeledDataset ds;
  if (a.kind == "log-linear" || a.kind == "clustered") {
    if (a.count < 2) throw UsageError("--count must be >= 2");
    DatasetOptions opt;
    opt.noise = a.noise;
    opt.num_classes = a.classes;
    opt.cluster_spread = a.spread;
    ds = gen_labeled_dataset(a.n, a.count, task,
                             a.kind == "log-linear" ? DatasetStructure::kLogLinear
                                                    : DatasetStructure::kClustered,
                             rng, opt);
  } else if (a.kind == "spd") {
    if (!(a.condition >= 1.0)) throw UsageError("--condition must be >= 1");
    std::vector<SymmetricMatrix> mats;
    std::vector<double> labels;
    for (std::size_t k = 0; k < a.count; ++k) {
      mats.push_back(gen_random_spd(a.n, a.condition, rng).symmetric());
      labels.push_back(task == Task::kRegression
                           ? rng.uniform()
                           : static_cast<double>(k % static_cast<std::size_t>(a.classes)));
    }
    ds = make_dataset(std::move(mats), std::move(labels), task);
  } else {
    throw UsageError("--kind must be log-linear, clustered, spd or series");
  }
  write_matrices(a.output, ds);
  summary["count"] = ds.size();
  summary["task"] = to_string(ds.task);
  out << summary.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- mix

struct MixArgs {
  std::string input;
  std::string output;
  std::string strategy = "rmixup";
  double alpha = 1.0;
  double keep_prob = 0.5;
  std::optional<double> bandwidth;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::string cache = "on";
};

int cmd_mix(const MixArgs& a, std::ostream& out) {
  const std::optional<Strategy> strategy = parse_strategy(a.strategy);
  if (!strategy) throw UsageError("unknown strategy '" + a.strategy + "'");
  if (a.cache != "on" && a.cache != "off") throw UsageError("--cache must be on or off");
  MixConfig config;
  config.strategy = *strategy;
  config.alpha = a.alpha;
  config.keep_prob = a.keep_prob;
  config.cmix_bandwidth = a.bandwidth;
  config.seed = a.seed;
  config.use_eigencache = a.cache == "on";
  try {
    config.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const LabeledDataset ds = read_matrices(a.input);
  const std::vector<MixedSample> mixed = augment_batch(ds, config, a.count, worker_threads());

  std::vector<SymmetricMatrix> matrices;
  std::vector<double> labels;
  matrices.reserve(mixed.size());
  labels.reserve(mixed.size());
  std::string prov = "id,strategy,source_i,source_j,lambda,mask,spd_validated,warnings,label\n";
  int warnings = 0;
  for (std::size_t k = 0; k < mixed.size(); ++k) {
    const MixedSample& s = mixed[k];
    const Provenance& p = s.provenance;
    matrices.push_back(s.matrix);
    labels.push_back(hard_label(s.label, ds.task));
    warnings += p.warnings;
    prov += std::to_string(k) + ',' + std::string(to_string(p.strategy)) + ',' +
            std::to_string(ds.ids[p.source_i]) + ',' +
            (p.source_j ? std::to_string(ds.ids[*p.source_j]) : std::string{}) + ',' +
            (p.lambda ? format_double(*p.lambda) : std::string{}) + ',' + p.mask_summary + ',' +
            (p.spd_validated ? "1" : "0") + ',' + std::to_string(p.warnings) + ',' +
            join_label(s.label) + '\n';
  }
  LabeledDataset result;
  if (!matrices.empty()) {
    result = make_dataset(std::move(matrices), std::move(labels), ds.task,
                          ds.is_correlation && preserves_unit_diagonal(*strategy));
  } else {
    result.task = ds.task;
  }
  write_matrices(a.output, result);
  write_text(provenance_path(a.output), prov);

  json summary = {{"command", "mix"},          {"strategy", a.strategy},
                  {"count", result.size()},    {"n", ds.dim()},
                  {"seed", a.seed},            {"cache", a.cache},
                  {"warnings", warnings},      {"output", a.output},
                  {"provenance", provenance_path(a.output).string()}};
  out << summary.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
  std::string input;
  std::string output;
  std::string format = "auto";
  std::string layout = "vars-as-rows";
  std::string sweep;
  std::string reduce = "truncate";
  Index t = 0;
};

std::string spdness_row(const std::string& sample, const SpdnessReport& r) {
  std::ostringstream os;
  os << sample << ',' << r.n << ',' << (r.t ? std::to_string(*r.t) : std::string{}) << ','
     << r.positive_count << ',' << format_double(r.spdness_pct) << ',' << (r.is_spd ? 1 : 0)
     << '\n';
  return os.str();
}

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
  if (a.format != "auto" && a.format != "spdb" && a.format != "series") {
    throw UsageError("--format must be auto, spdb or series");
  }
  if (a.reduce != "truncate" && a.reduce != "average") {
    throw UsageError("--reduce must be truncate or average");
  }
  const SeriesLayout layout = parse_layout(a.layout);
  std::vector<Index> sweep;
  if (!a.sweep.empty()) {
    sweep = parse_list<Index>(a.sweep, "--sweep");
    for (Index t : sweep) {
      if (t < 2) throw UsageError("--sweep lengths must be >= 2");
    }
  }
  const bool is_series =
      a.format == "series" || (a.format == "auto" && fs::path(a.input).extension() == ".csv");
  if (!is_series && !sweep.empty()) throw UsageError("--sweep needs a series input");

  std::string csv = "sample,n,t,positive_count,spdness_pct,is_spd\n";
  std::size_t rows = 0;
  std::size_t spd_rows = 0;
  double pct_sum = 0.0;
  auto record = [&](const std::string& name, const SpdnessReport& r) {
    csv += spdness_row(name, r);
    ++rows;
    spd_rows += r.is_spd ? 1 : 0;
    pct_sum += r.spdness_pct;
  };

  if (is_series) {
    const SeriesMatrix series = read_series_csv(a.input, layout);
    if (sweep.empty()) {
      record("0", spdness_report(correlation(series), series.n_steps()));
    } else {
      for (Index t : sweep) {
        if (t > series.n_steps()) {
          throw UsageError("--sweep length " + std::to_string(t) + " exceeds series length " +
                           std::to_string(series.n_steps()));
        }
        if (a.reduce == "average" && series.n_steps() % t != 0) {
          throw UsageError("--sweep length " + std::to_string(t) + " does not divide series length " +
                           std::to_string(series.n_steps()));
        }
        const SeriesMatrix reduced =
            a.reduce == "truncate" ? truncate(series, t) : downsample_by_averaging(series, t);
        record(std::to_string(t), spdness_report(correlation(reduced), t));
      }
    }
  } else {
    const LabeledDataset ds = read_matrices(a.input);
    const std::optional<Index> t = a.t > 0 ? std::optional<Index>(a.t) : std::nullopt;
    for (std::size_t k = 0; k < ds.size(); ++k) {
      record(std::to_string(ds.ids[k]), spdness_report(ds.matrices[k], t));
    }
  }
  const double mean_pct = rows > 0 ? pct_sum / static_cast<double>(rows) : 0.0;
  csv += "all,,," + std::to_string(spd_rows) + ',' + format_double(mean_pct) + ',' +
         (rows > 0 && spd_rows == rows ? "1" : "0") + '\n';
  if (emit_csv(csv, a.output, out)) {
    json summary = {{"command", "diagnose"}, {"rows", rows},       {"spd_rows", spd_rows},
                    {"mean_spdness_pct", mean_pct}, {"output", a.output}};
    out << summary.dump() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- regress

struct RegressArgs {
  std::string input;
  std::string output;
  std::size_t trials = 100;
  std::string lambdas = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::optional<double> sigma;
  std::uint64_t seed = 0;
};

int cmd_regress(const RegressArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<double> grid = parse_list<double>(a.lambdas, "--lambdas");
  for (double l : grid) {
    if (!(l >= 0.0 && l <= 1.0)) throw UsageError("--lambdas entries must lie in [0, 1]");
  }
  if (a.sigma && !(*a.sigma > 0.0)) throw UsageError("--sigma must be positive");

  const LabeledDataset ds = read_matrices(a.input);
  if (ds.task != Task::kRegression) {
    throw DomainError("regress needs a regression dataset");
  }
  for (double y : ds.labels) {
    if (y < 0.0) throw DomainError("regress needs nonnegative labels, found " + format_double(y));
  }
  std::string csv =
      "pair,i,j,lambda,y_mix,pred_geodesic,pred_line,err_geodesic,err_line,violation,ordering\n";
  std::size_t violations = 0;
  std::size_t ordering_failures = 0;
  double sigma = 1.0;
  if (a.trials > 0) {
    if (ds.size() < 2) throw DomainError("regress needs at least two samples");
    sigma = a.sigma.value_or(median_pairwise_distance(ds, 100));
    KernelConfig kc;
    kc.sigma = sigma;
    for (std::size_t trial = 0; trial < a.trials; ++trial) {
      Rng rng = Rng::derive(a.seed, trial);
      const std::size_t i = rng.index(ds.size());
      std::size_t j = rng.index(ds.size() - 1);
      if (j >= i) ++j;
      const LossComparisonReport rep =
          compare_mixing_losses(SpdMatrix::from(ds.matrices[i]),
                                SpdMatrix::from(ds.matrices[j]), ds.labels[i], ds.labels[j],
                                grid, kc);
      for (std::size_t r = 0; r < rep.rows.size(); ++r) {
        const LossComparisonRow& row = rep.rows[r];
        csv += std::to_string(trial) + ',' + std::to_string(ds.ids[i]) + ',' +
               std::to_string(ds.ids[j]) + ',' + format_double(row.lambda) + ',' +
               format_double(row.y_mix) + ',' + format_double(row.pred_geodesic) + ',' +
               format_double(row.pred_line) + ',' + format_double(row.err_geodesic) + ',' +
               format_double(row.err_line) + ',' + (row.violation ? "1" : "0") + ',' +
               (row.ordering_holds ? "1" : "0") + '\n';
        if ((row.violation || !row.ordering_holds) && violations + ordering_failures < 5) {
          err << (row.violation ? "loss violation: " : "ordering failure: ") << rep.describe(r)
              << '\n';
        }
        violations += row.violation ? 1 : 0;
        ordering_failures += row.ordering_holds ? 0 : 1;
      }
    }
  }
  if (emit_csv(csv, a.output, out)) {
    json summary = {{"command", "regress"},       {"trials", a.trials},
                    {"lambdas", grid.size()},     {"sigma", sigma},
                    {"violations", violations},   {"ordering_failures", ordering_failures},
                    {"output", a.output}};
    out << summary.dump() << '\n';
  }
  if (violations + ordering_failures > 0) {
    err << violations << " loss violations, " << ordering_failures << " ordering failures\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- probe

struct ProbeArgs {
  std::string input;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

int cmd_probe(const ProbeArgs& a, std::ostream& out) {
  if (a.trials == 0) throw UsageError("--trials must be >= 1");
  const LabeledDataset ds = read_matrices(a.input);
  Rng rng(a.seed);
  const ProbeResult r = incorrect_label_probe(ds, a.trials, rng);
  json summary = {{"command", "probe"},     {"trials", r.trials},   {"mean_dv", r.mean_dv},
                  {"mean_dr", r.mean_dr},   {"std_dv", r.std_dv},   {"std_dr", r.std_dr},
                  {"relative_gap", r.relative_gap()}};
  out << summary.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string dims = "8,50,120,360";
  std::size_t batch = 64;
  std::size_t reps = 5;
  double condition = 1e3;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  BenchConfig config;
  config.dims = parse_list<Index>(a.dims, "--n");
  config.batch = a.batch;
  config.reps = a.reps;
  config.seed = a.seed;
  config.condition = a.condition;
  try {
    config.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!(a.condition >= 1.0)) throw UsageError("--condition must be >= 1");
  const std::vector<BenchRow> rows = run_mix_benchmark(config);
  std::string csv =
      "n,batch,reps,direct_sec,cached_sec,vanilla_sec,precompute_sec,direct_eigs,cached_eigs,"
      "speedup\n";
  for (const BenchRow& r : rows) {
    csv += std::to_string(r.n) + ',' + std::to_string(r.batch) + ',' + std::to_string(r.reps) +
           ',' + format_double(r.direct_sec) + ',' + format_double(r.cached_sec) + ',' +
           format_double(r.vanilla_sec) + ',' + format_double(r.precompute_sec) + ',' +
           format_double(r.direct_eigs) + ',' + format_double(r.cached_eigs) + ',' +
           format_double(r.speedup()) + '\n';
  }
  if (emit_csv(csv, a.output, out)) {
    json summary = {{"command", "bench"}, {"rows", rows.size()}, {"output", a.output}};
    out << summary.dump() << '\n';
  }
  return kExitOk;
}

}  // namespace

unsigned worker_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* env = std::getenv("SPD_AUGMENT_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  unsigned value = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("SPD_AUGMENT_THREADS must be a nonnegative integer");
  }
  return value == 0 ? hw : value;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixup augmentation and geometry tools for SPD matrices", "spdmix"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", "spdmix 0.1.0");
  // Accepted here so that it shows in help; expand_config consumes it.
  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value file merged under the flags");
  };

  GenArgs gen;
  CLI::App* g = app.add_subcommand("gen", "Generate a synthetic dataset or series");
  g->add_option("--kind", gen.kind, "log-linear | clustered | spd | series");
  g->add_option("--n", gen.n, "Matrix dimension / number of variables");
  g->add_option("--count", gen.count, "Number of samples");
  g->add_option("--t", gen.t, "Series length");
  g->add_option("--rank", gen.rank, "Latent rank of series (default n)");
  g->add_option("--noise", gen.noise, "Noise level");
  g->add_option("--task", gen.task, "regression | classification");
  g->add_option("--classes", gen.classes, "Number of classes");
  g->add_option("--condition", gen.condition, "Condition number for --kind spd");
  g->add_option("--spread", gen.spread, "Within-class spread for --kind clustered");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("-o,--output", gen.output, "Output path")->required();
  g->add_option("--series-layout", gen.layout, "vars-as-rows | vars-as-cols");
  g->add_flag("--header", gen.header, "Write a header line for series CSV");
  add_config(g);

  MixArgs mix;
  CLI::App* m = app.add_subcommand("mix", "Augment a dataset");
  m->add_option("-i,--input", mix.input, "Input SPDB file")->required();
  m->add_option("-o,--output", mix.output, "Output SPDB file")->required();
  m->add_option("--strategy", mix.strategy,
                "rmixup | vmixup | dmixup | dropnode | dropedge | gmixup | cmixup");
  m->add_option("--alpha", mix.alpha, "Beta(alpha, alpha) shape");
  m->add_option("--keep-prob", mix.keep_prob, "Keep probability for drop strategies");
  m->add_option("--bandwidth", mix.bandwidth, "Label-kernel width for cmixup");
  m->add_option("--count", mix.count, "Number of augmented samples");
  m->add_option("--seed", mix.seed, "Random seed");
  m->add_option("--cache", mix.cache, "Eigencache for rmixup: on | off");
  add_config(m);

  DiagnoseArgs diag;
  CLI::App* d = app.add_subcommand("diagnose", "SPD-ness report");
  d->add_option("-i,--input", diag.input, "SPDB file or series CSV")->required();
  d->add_option("-o,--output", diag.output, "CSV output path (default stdout)");
  d->add_option("--format", diag.format, "auto | spdb | series");
  d->add_option("--series-layout", diag.layout, "vars-as-rows | vars-as-cols");
  d->add_option("--sweep", diag.sweep, "Comma-separated series lengths");
  d->add_option("--reduce", diag.reduce, "truncate | average");
  d->add_option("--t", diag.t, "Series length behind SPDB matrices, for the rank bound");
  add_config(d);

  RegressArgs reg;
  CLI::App* r = app.add_subcommand("regress", "Geodesic versus straight-line loss comparison");
  r->add_option("-i,--input", reg.input, "Regression SPDB file")->required();
  r->add_option("-o,--output", reg.output, "CSV output path (default stdout)");
  r->add_option("--trials", reg.trials, "Number of random pairs");
  r->add_option("--lambdas", reg.lambdas, "Comma-separated mix ratios");
  r->add_option("--sigma", reg.sigma, "Kernel bandwidth (default median pairwise distance)");
  r->add_option("--seed", reg.seed, "Random seed");
  add_config(r);

  ProbeArgs probe;
  CLI::App* p = app.add_subcommand("probe", "Incorrect-label probe");
  p->add_option("-i,--input", probe.input, "Regression SPDB file")->required();
  p->add_option("--trials", probe.trials, "Number of label triples");
  p->add_option("--seed", probe.seed, "Random seed");
  add_config(p);

  BenchArgs bench;
  CLI::App* b = app.add_subcommand("bench", "Time direct, cached and vanilla mixing");
  b->add_option("--n", bench.dims, "Comma-separated dimensions");
  b->add_option("--batch", bench.batch, "Mixes per repetition");
  b->add_option("--reps", bench.reps, "Repetitions");
  b->add_option("--condition", bench.condition, "Condition number of generated matrices");
  b->add_option("--seed", bench.seed, "Random seed");
  b->add_option("-o,--output", bench.output, "CSV output path (default stdout)");
  add_config(b);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << app.version() << '\n';
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
      err << sub->help();
      return kExitUsage;
    }
    if (g->parsed()) return cmd_gen(gen, out);
    if (m->parsed()) return cmd_mix(mix, out);
    if (d->parsed()) return cmd_diagnose(diag, out);
    if (r->parsed()) return cmd_regress(reg, out, err);
    if (p->parsed()) return cmd_probe(probe, out);
    if (b->parsed()) return cmd_bench(bench, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace spdmix::cli
