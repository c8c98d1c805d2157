#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "caslgp/dataset.hpp"
#include "caslgp/errors.hpp"

namespace caslgp::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
std::string join_values(const std::vector<T>& v) {
  std::vector<std::string> s;
  for (const auto& x : v) s.push_back(std::to_string(x));
  return join_csv(s);
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

}  // namespace

std::vector<ConfigEntry> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot read config " + path.string());
  std::vector<ConfigEntry> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(number, path.string() + ": expected key=value");
    }
    ConfigEntry e{trim(t.substr(0, eq)), trim(t.substr(eq + 1)), number};
    if (e.key.empty()) throw ParseError(number, path.string() + ": empty key");
    std::replace(e.key.begin(), e.key.end(), '_', '-');  // n_train and n-train name the same key
    out.push_back(std::move(e));
  }
  return out;
}

std::string join_csv(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void RunConfig::validate() const {
  require(!(rank && rho), ErrorKind::argument, "set only one of --rank and --rho");
  require(benchmark == "piecewise" || benchmark == "gaussian-mixture", ErrorKind::argument,
          "unknown benchmark '" + benchmark + "'");
  require(classifier == "svm" || classifier == "nearest-centroid", ErrorKind::argument,
          "unknown classifier '" + classifier + "'");
  require(svm_kernel == "linear" || svm_kernel == "rbf", ErrorKind::argument,
          "unknown svm kernel '" + svm_kernel + "'");
  require(svm_c > 0.0 && svm_gamma > 0.0 && svm_tol > 0.0, ErrorKind::argument,
          "svm parameters must be positive");
  require(gp_restarts >= 1, ErrorKind::argument, "gp-restarts must be at least 1");
  require(folds >= 2, ErrorKind::argument, "folds must be at least 2");
  require(plateau >= 0.0, ErrorKind::argument, "plateau must be nonnegative");
  for (const auto& m : methods) parse_method(m);
  emulator().validate();
}

EmulatorConfig RunConfig::emulator() const {
  EmulatorConfig c;
  c.method = parse_method(method);
  c.clusters = clusters;
  if (rank) {
    c.rank = RankSelection::forced(*rank);
  } else if (rho) {
    c.rank = RankSelection::ratio(*rho);
  } else {
    c.rank = RankSelection::forced(2);
  }
  c.eta = eta;
  c.classifier = classifier == "nearest-centroid" ? ClassifierKind::nearest_centroid
                                                  : ClassifierKind::svm;
  c.svm.kernel = svm_kernel == "rbf" ? SvmKernel::rbf : SvmKernel::linear;
  c.svm.C = svm_c;
  c.svm.rbf_gamma = svm_gamma;
  c.svm.tol = svm_tol;
  c.svm.max_iter = svm_max_iter;
  c.gp.restarts = gp_restarts;
  c.gp.max_opt_iter = gp_max_iter;
  c.gp.fixed_noise = gp_noise;
  c.gp.isotropic = gp_isotropic;
  c.slices = slices;
  c.seed = seed;
  return c;
}

BenchmarkSpec RunConfig::benchmark_spec() const {
  BenchmarkSpec spec;
  if (benchmark == "gaussian-mixture") {
    spec.kind = Benchmark::gaussian_mixture;
    spec.mixture = mixture_params.empty() ? default_mixture_params()
                                          : load_mixture_params(mixture_params);
  } else {
    require(benchmark == "piecewise", ErrorKind::argument, "unknown benchmark '" + benchmark + "'");
    spec.kind = Benchmark::piecewise;
  }
  return spec;
}

std::vector<std::string> RunConfig::lines() const {
  std::vector<std::string> kv{
      "benchmark=" + benchmark,
      "bundle=" + bundle,
      "classifier=" + classifier,
      "cluster-list=" + join_values(cluster_list),
      "clusters=" + std::to_string(clusters),
      "dump-clusters=" + dump_clusters,
      "dump-directions=" + dump_directions,
      "eta=" + format_real(eta),
      "folds=" + std::to_string(folds),
      "gp-isotropic=" + std::string(gp_isotropic ? "true" : "false"),
      "gp-max-iter=" + std::to_string(gp_max_iter),
      "gp-noise=" + opt_real(gp_noise),
      "gp-restarts=" + std::to_string(gp_restarts),
      "inputs=" + inputs,
      "max-clusters=" + std::to_string(max_clusters),
      "method=" + method,
      "methods=" + join_csv(methods),
      "mixture-params=" + mixture_params,
      "n-test=" + std::to_string(n_test),
      "n-train=" + std::to_string(n_train),
      "out=" + out,
      "plateau=" + format_real(plateau),
      "predictions=" + predictions,
      "rank=" + (rank ? std::to_string(*rank) : std::string()),
      "ranks=" + join_values(ranks),
      "rho=" + opt_real(rho),
      "seed=" + std::to_string(seed),
      "seeds=" + join_values(seeds),
      "slices=" + std::to_string(slices),
      "svm-c=" + format_real(svm_c),
      "svm-gamma=" + format_real(svm_gamma),
      "svm-kernel=" + svm_kernel,
      "svm-max-iter=" + std::to_string(svm_max_iter),
      "svm-tol=" + format_real(svm_tol),
      "test=" + test,
      "train=" + train,
  };
  std::sort(kv.begin(), kv.end());
  return kv;
}

}  // namespace caslgp::cli
