#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "caslgp/bundle.hpp"
#include "caslgp/cross_validation.hpp"
#include "caslgp/errors.hpp"
#include "caslgp/random.hpp"
#include "experiments.hpp"
#include "report.hpp"
#include "run_config.hpp"

namespace caslgp::cli {

namespace {

namespace fs = std::filesystem;

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

void require_path(const std::string& value, const std::string& flag) {
  require(!value.empty(), ErrorKind::argument, "missing required --" + flag);
}

template <class T>
std::vector<T> parse_numbers(const std::string& text, const std::string& key) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    T v{};
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    require(ec == std::errc() && p == item.data() + item.size(), ErrorKind::argument,
            "--" + key + ": '" + item + "' is not a nonnegative integer");
    out.push_back(v);
  }
  return out;
}

// Flag plumbing shared by the subcommands.
struct Flags {
  RunConfig cfg;
  std::string config_path;
  std::string methods;
  std::string ranks;
  std::string cluster_list;
  std::string seeds;

  void finish() {
    if (!methods.empty()) cfg.methods = split_list(methods);
    if (!ranks.empty()) cfg.ranks = parse_numbers<std::size_t>(ranks, "ranks");
    if (!cluster_list.empty()) cfg.cluster_list = parse_numbers<std::size_t>(cluster_list, "cluster-list");
    if (!seeds.empty()) cfg.seeds = parse_numbers<std::uint64_t>(seeds, "seeds");
    cfg.validate();
  }
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "Flat key=value config file; flags override it");
  sub->add_option("--seed", f.cfg.seed, "Master seed");
  sub->add_option("--out", f.cfg.out, "Output path");
}

void add_benchmark(CLI::App* sub, Flags& f) {
  sub->add_option("--benchmark", f.cfg.benchmark, "piecewise | gaussian-mixture");
  sub->add_option("--mixture-params", f.cfg.mixture_params, "Gaussian-mixture parameter JSON");
  sub->add_option("--n-train", f.cfg.n_train, "Training sample count");
}

void add_model(CLI::App* sub, Flags& f, bool with_method) {
  if (with_method) sub->add_option("--method", f.cfg.method, "cas | as | sir | save | plain-gp");
  if (with_method) sub->add_option("--clusters", f.cfg.clusters, "Cluster count J");
  sub->add_option("--rank", f.cfg.rank, "Rank forced on every cluster");
  sub->add_option("--rho", f.cfg.rho, "Eigenvalue ratio for per-cluster rank selection");
  sub->add_option("--eta", f.cfg.eta, "Gradient/Euclidean distance blend in [0,1]");
  sub->add_option("--classifier", f.cfg.classifier, "svm | nearest-centroid");
  sub->add_option("--svm-kernel", f.cfg.svm_kernel, "linear | rbf");
  sub->add_option("--svm-c", f.cfg.svm_c, "SVM soft-margin penalty");
  sub->add_option("--svm-gamma", f.cfg.svm_gamma, "RBF kernel width");
  sub->add_option("--svm-tol", f.cfg.svm_tol, "SMO stopping tolerance");
  sub->add_option("--svm-max-iter", f.cfg.svm_max_iter, "SMO iteration cap (0: 10 n)");
  sub->add_option("--gp-restarts", f.cfg.gp_restarts, "Hyperparameter search restarts");
  sub->add_option("--gp-max-iter", f.cfg.gp_max_iter, "Iterations per restart");
  sub->add_option("--gp-noise", f.cfg.gp_noise, "Fix the noise variance instead of learning it");
  sub->add_option("--gp-isotropic", f.cfg.gp_isotropic, "Single lengthscale (true/false)");
  sub->add_option("--slices", f.cfg.slices, "SIR/SAVE slice count");
}

DataSet train_set(const RunConfig& cfg) {
  if (!cfg.train.empty()) return load_dataset(cfg.train);
  return generate_dataset(cfg.benchmark_spec(), cfg.n_train, true, derive_seed(cfg.seed, 1));
}

void dump_directions(const CasEmulator& em, const fs::path& path) {
  std::string text = "cluster,direction,eigenvalue";
  for (std::size_t i = 1; i <= em.dim(); ++i) text += ",v_" + std::to_string(i);
  text += '\n';
  for (std::size_t j = 0; j < em.clusters(); ++j) {
    const LocalModel& m = em.locals()[j];
    for (Eigen::Index k = 0; k < m.projection.cols(); ++k) {
      text += std::to_string(j + 1) + "," + std::to_string(k + 1) + ",";
      text += k < m.spectrum.size() ? format_real(m.spectrum[k]) : std::string();
      for (Eigen::Index i = 0; i < m.projection.rows(); ++i) text += "," + format_real(m.projection(i, k));
      text += '\n';
    }
  }
  write_text(path, text);
}

void dump_clusters(const CasEmulator& em, const fs::path& path) {
  std::string text = "index,label\n";
  for (std::size_t i = 0; i < em.labels().size(); ++i) {
    text += std::to_string(i) + "," + std::to_string(em.labels()[i]) + "\n";
  }
  write_text(path, text);
}

// --- commands ---------------------------------------------------------------

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.out, "out");
  const auto [train, test] = benchmark_split(cfg.benchmark_spec(), cfg.n_train, cfg.n_test, cfg.seed);
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  save_dataset(train, dir / "train.csv");
  save_dataset(test, dir / "test.csv");
  std::string prov;
  for (const auto& l : cfg.lines()) prov += l + "\n";
  write_text(dir / "config.txt", prov);
  out << "train=" << (dir / "train.csv").string() << " n=" << train.size() << "\n";
  out << "test=" << (dir / "test.csv").string() << " n=" << test.size() << "\n";
  return 0;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.train, "train");
  require_path(cfg.out, "out");
  const DataSet train = load_dataset(cfg.train);
  const CasEmulator em = fit_emulator(train, cfg.emulator());
  save_emulator(em, cfg.out);
  if (!cfg.dump_directions.empty()) dump_directions(em, cfg.dump_directions);
  if (!cfg.dump_clusters.empty()) dump_clusters(em, cfg.dump_clusters);
  for (const auto& w : em.warnings()) err << "warning: " << w << "\n";
  out << "method=" << to_string(em.config().method) << " clusters=" << em.clusters() << "\n";
  for (std::size_t j = 0; j < em.clusters(); ++j) {
    const LocalModel& m = em.locals()[j];
    out << "cluster=" << j + 1 << " size=" << m.members.size() << " rank=" << m.rank()
        << " tail=" << format_real(m.tail()) << "\n";
  }
  out << "bundle=" << cfg.out << "\n";
  return 0;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.bundle, "bundle");
  require_path(cfg.inputs, "inputs");
  const CasEmulator em = load_emulator(cfg.bundle);
  const auto xs = load_inputs(cfg.inputs);
  std::string text = "index,mean,variance,label\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto p = em.predict(xs[i]);
    text += std::to_string(i) + "," + format_real(p.mean) + "," + format_real(p.variance) + "," +
            std::to_string(p.label) + "\n";
  }
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_text(cfg.out, text);
    out << "predictions=" << cfg.out << " n=" << xs.size() << "\n";
  }
  return 0;
}

// Reads the `prediction` and `truth` columns of a per-point CSV.
std::pair<std::vector<double>, std::vector<double>> read_predictions(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot read " + path.string());
  std::string line;
  std::size_t number = 0;
  std::vector<std::string> header;
  std::vector<double> pred;
  std::vector<double> truth;
  std::size_t ip = 0;
  std::size_t it = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      const auto p = std::find(header.begin(), header.end(), "prediction");
      const auto t = std::find(header.begin(), header.end(), "truth");
      if (p == header.end() || t == header.end()) {
        throw ParseError(number, path.string() + ": header needs 'prediction' and 'truth' columns");
      }
      ip = static_cast<std::size_t>(p - header.begin());
      it = static_cast<std::size_t>(t - header.begin());
      continue;
    }
    if (cells.size() != header.size()) {
      throw ParseError(number, path.string() + ": expected " + std::to_string(header.size()) +
                                   " cells, found " + std::to_string(cells.size()));
    }
    auto number_at = [&](std::size_t k) {
      double v = 0.0;
      const auto& s = cells[k];
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw ParseError(number, path.string() + ": non-numeric cell '" + s + "'");
      }
      return v;
    };
    pred.push_back(number_at(ip));
    truth.push_back(number_at(it));
  }
  return {pred, truth};
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.predictions.empty()) {
    const auto [pred, truth] = read_predictions(cfg.predictions);
    out << "nmse=" << format_real(nmse(pred, truth)) << " n=" << pred.size() << "\n";
    return 0;
  }
  require_path(cfg.bundle, "bundle");
  require_path(cfg.test, "test");
  const CasEmulator em = load_emulator(cfg.bundle);
  const DataSet test = load_dataset(cfg.test);
  std::vector<double> pred;
  std::vector<double> truth;
  Table points{"Per-point predictions", {"index", "truth", "prediction", "variance", "label"}, {}};
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto p = em.predict(test[i].x);
    pred.push_back(p.mean);
    truth.push_back(test[i].y);
    points.rows.push_back({std::to_string(i), format_real(test[i].y), format_real(p.mean),
                           format_real(p.variance), std::to_string(p.label)});
  }
  const double score = nmse(pred, truth);
  if (!cfg.out.empty()) {
    const auto config = cfg.lines();
    write_text(cfg.out + ".csv", render_csv(points, config));
    Table summary{"Evaluation", {"metric", "value"},
                  {{"n", std::to_string(test.size())}, {"nmse", format_real(score)},
                   {"nmse_percent", percent(score)}}};
    write_text(cfg.out + ".md", render_markdown(summary, config));
  }
  out << "nmse=" << format_real(score) << " n=" << test.size() << "\n";
  return 0;
}

int cmd_cv(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const DataSet train = train_set(cfg);
  const CvReport report =
      cross_validate_clusters(train, cfg.emulator(), cfg.max_clusters, cfg.folds, cfg.plateau);
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  Table table{"Cross-validation over cluster count", {"J", "mean_nmse", "folds_used", "failed_folds", "chosen"}, {}};
  for (const auto& e : report.entries) {
    table.rows.push_back({std::to_string(e.clusters), format_real(e.mean_nmse),
                          std::to_string(report.folds - e.failed_folds),
                          std::to_string(e.failed_folds), e.clusters == report.chosen ? "*" : ""});
    out << "J=" << e.clusters << " mean_nmse=" << format_real(e.mean_nmse) << "\n";
  }
  if (!cfg.out.empty()) write_report(cfg.out, table, cfg.lines());
  out << "chosen=" << report.chosen << "\n";
  return 0;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<Method> methods;
  for (const auto& m : cfg.methods) methods.push_back(parse_method(m));
  const auto cells = comparison_cells(methods, cfg.ranks, cfg.cluster_list);
  require(!cells.empty(), ErrorKind::argument, "compare: no cells selected");
  const std::vector<std::uint64_t> seeds = cfg.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : cfg.seeds;

  std::vector<CellResult> results;
  if (!cfg.train.empty() || !cfg.test.empty()) {
    require_path(cfg.train, "train");
    require_path(cfg.test, "test");
    const DataSet train = load_dataset(cfg.train);
    const DataSet test = load_dataset(cfg.test);
    for (const Cell& c : cells) {
      CellResult r{c, cfg.seed, std::numeric_limits<double>::quiet_NaN(), {}};
      try {
        r.nmse = evaluate_cell(train, test, c, cfg.emulator(), cfg.seed);
      } catch (const Error& e) {
        r.error = std::string(to_string(e.kind())) + ": " + e.what();
      }
      results.push_back(std::move(r));
    }
  } else {
    results = run_comparison(cfg.benchmark_spec(), cfg.n_train, cfg.n_test, seeds, cells,
                             cfg.emulator());
  }
  const std::vector<std::uint64_t> used =
      cfg.train.empty() ? seeds : std::vector<std::uint64_t>{cfg.seed};

  // Long form: one row per cell, one column per seed.
  Table csv{"Comparison", {"method", "clusters", "rank", "mean_nmse"}, {}};
  for (auto s : used) csv.columns.push_back("nmse_seed_" + std::to_string(s));
  std::map<std::string, double> mean_of;
  for (const Cell& c : cells) {
    std::vector<std::string> row{to_string(c.method), std::to_string(c.clusters),
                                 c.rank ? std::to_string(*c.rank) : ""};
    double sum = 0.0;
    std::size_t ok = 0;
    std::vector<std::string> per;
    for (const auto& r : results) {
      if (r.cell.method != c.method || r.cell.clusters != c.clusters || r.cell.rank != c.rank) continue;
      per.push_back(format_real(r.nmse));
      if (!r.error.empty()) err << "warning: " << c.name() << " seed " << r.seed << ": " << r.error << "\n";
      if (std::isfinite(r.nmse)) {
        sum += r.nmse;
        ++ok;
      }
    }
    const double mean = ok == per.size() && ok > 0 ? sum / static_cast<double>(ok)
                                                   : std::numeric_limits<double>::quiet_NaN();
    row.push_back(format_real(mean));
    row.insert(row.end(), per.begin(), per.end());
    csv.rows.push_back(row);
    mean_of[c.name() + "|" + (c.rank ? std::to_string(*c.rank) : "")] = mean;
    out << c.name() << " rank=" << (c.rank ? std::to_string(*c.rank) : "-")
        << " mean_nmse=" << format_real(mean) << "\n";
  }

  // Paper layout: one row per rank, one column per method.
  std::vector<std::string> names;
  for (const Cell& c : cells) {
    if (std::find(names.begin(), names.end(), c.name()) == names.end()) names.push_back(c.name());
  }
  Table md{"NMSE by rank and method (mean over " + std::to_string(used.size()) + " seed(s))", {"r"}, {}};
  md.columns.insert(md.columns.end(), names.begin(), names.end());
  for (std::size_t r : cfg.ranks) {
    std::vector<std::string> row{std::to_string(r)};
    for (const auto& n : names) {
      auto it = mean_of.find(n + "|" + std::to_string(r));
      if (it == mean_of.end()) it = mean_of.find(n + "|");
      row.push_back(it == mean_of.end() ? "" : percent(it->second));
    }
    md.rows.push_back(row);
  }
  if (!cfg.out.empty()) {
    const auto config = cfg.lines();
    write_text(cfg.out + ".csv", render_csv(csv, config));
    write_text(cfg.out + ".md", render_markdown(md, config));
  }
  return 0;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument:
    case ErrorKind::parse: return 2;
    case ErrorKind::io: return 3;
    default: return 1;
  }
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << "error: kind=" << kind << " message=" << one_line(message) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clustered active-subspace local GP emulators", "caslgp"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("gen", "Generate benchmark train/test CSVs");
  add_common(gen, f);
  add_benchmark(gen, f);
  gen->add_option("--n-test", f.cfg.n_test, "Test sample count");

  auto* fit = app.add_subcommand("fit", "Fit an emulator and save its bundle");
  add_common(fit, f);
  fit->add_option("--train", f.cfg.train, "Training CSV with gradient columns");
  add_model(fit, f, true);
  fit->add_option("--dump-directions", f.cfg.dump_directions, "CSV of retained directions");
  fit->add_option("--dump-clusters", f.cfg.dump_clusters, "CSV of index,label");

  auto* predict = app.add_subcommand("predict", "Predict at the inputs of a CSV");
  add_common(predict, f);
  predict->add_option("--bundle", f.cfg.bundle, "Emulator bundle");
  predict->add_option("--inputs", f.cfg.inputs, "CSV with x_1..x_d columns");

  auto* eval = app.add_subcommand("eval", "Test NMSE of a bundle, or of a predictions CSV");
  add_common(eval, f);
  eval->add_option("--bundle", f.cfg.bundle, "Emulator bundle");
  eval->add_option("--test", f.cfg.test, "Test CSV");
  eval->add_option("--predictions", f.cfg.predictions, "CSV with prediction and truth columns");

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation of the cluster count");
  add_common(cv, f);
  add_benchmark(cv, f);
  cv->add_option("--train", f.cfg.train, "Training CSV (default: generate from the benchmark)");
  add_model(cv, f, false);
  cv->add_option("--folds", f.cfg.folds, "Fold count k");
  cv->add_option("--max-clusters", f.cfg.max_clusters, "Largest J tried");
  cv->add_option("--plateau", f.cfg.plateau, "Relative tolerance of the plateau rule");

  auto* compare = app.add_subcommand("compare", "Method x rank comparison table");
  add_common(compare, f);
  add_benchmark(compare, f);
  compare->add_option("--n-test", f.cfg.n_test, "Test sample count");
  compare->add_option("--train", f.cfg.train, "Training CSV (with --test, instead of generating)");
  compare->add_option("--test", f.cfg.test, "Test CSV");
  add_model(compare, f, false);
  compare->add_option("--methods", f.methods, "Comma list of methods");
  compare->add_option("--ranks", f.ranks, "Comma list of ranks");
  compare->add_option("--cluster-list", f.cluster_list, "Comma list of CAS cluster counts");
  compare->add_option("--seeds", f.seeds, "Comma list of data/model seeds");

  static const std::map<std::string, std::string> list_keys{
      {"methods", "--methods"}, {"ranks", "--ranks"}, {"cluster-list", "--cluster-list"}, {"seeds", "--seeds"}};

  try {
    // Config-file values go in front of the user's flags so the flags win.
    std::vector<std::string> argv = args;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path.empty() && !args.empty()) {
      CLI::App* sub = nullptr;
      for (auto* s : app.get_subcommands({})) {
        if (s->get_name() == args[0]) sub = s;
      }
      if (sub != nullptr) {
        std::vector<std::string> injected;
        for (const auto& e : read_config_file(config_path)) {
          if (e.key == "config") throw ParseError(e.line, "config files cannot nest");
          bool known = false;
          for (auto* s : app.get_subcommands({})) known = known || s->get_option_no_throw("--" + e.key) != nullptr;
          if (!known) throw ParseError(e.line, config_path + ": unknown key '" + e.key + "'");
          if (sub->get_option_no_throw("--" + e.key) != nullptr) injected.push_back("--" + e.key + "=" + e.value);
        }
        argv.insert(argv.begin() + 1, injected.begin(), injected.end());
      }
    }
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
    f.finish();

    const RunConfig& cfg = f.cfg;
    if (gen->parsed()) return cmd_gen(cfg, out);
    if (fit->parsed()) return cmd_fit(cfg, out, err);
    if (predict->parsed()) return cmd_predict(cfg, out);
    if (eval->parsed()) return cmd_eval(cfg, out);
    if (cv->parsed()) return cmd_cv(cfg, out, err);
    if (compare->parsed()) return cmd_compare(cfg, out, err);
    return 2;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "argument", e.what());
    return 2;
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return 1;
  }
}

}  // namespace caslgp::cli
