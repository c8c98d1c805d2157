#include "caslgp/bundle.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "caslgp/errors.hpp"

namespace caslgp {

using nlohmann::json;

namespace {

json vec_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vec_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Row-major nested arrays.
json mat_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i).transpose()));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Matrix mat_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  require(static_cast<Eigen::Index>(data.size()) == rows, ErrorKind::parse,
          "bundle: matrix row count mismatch");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vector r = vec_from_json(data[static_cast<std::size_t>(i)]);
    require(r.size() == cols, ErrorKind::parse, "bundle: matrix column count mismatch");
    m.row(i) = r.transpose();
  }
  return m;
}

std::string kernel_name(SvmKernel k) { return k == SvmKernel::linear ? "linear" : "rbf"; }

SvmKernel kernel_from_name(const std::string& s) {
  if (s == "linear") return SvmKernel::linear;
  if (s == "rbf") return SvmKernel::rbf;
  throw Error(ErrorKind::parse, "bundle: unknown svm kernel '" + s + "'");
}

json svm_config_to_json(const SvmConfig& c) {
  return json{{"kernel", kernel_name(c.kernel)},
              {"C", c.C},
              {"rbf_gamma", c.rbf_gamma},
              {"max_iter", c.max_iter},
              {"tol", c.tol}};
}

SvmConfig svm_config_from_json(const json& j) {
  SvmConfig c;
  c.kernel = kernel_from_name(j.at("kernel").get<std::string>());
  c.C = j.at("C").get<double>();
  c.rbf_gamma = j.at("rbf_gamma").get<double>();
  c.max_iter = j.at("max_iter").get<std::size_t>();
  c.tol = j.at("tol").get<double>();
  return c;
}

json config_to_json(const EmulatorConfig& c) {
  json j{{"method", to_string(c.method)},
         {"clusters", c.clusters},
         {"eta", c.eta},
         {"classifier", c.classifier == ClassifierKind::svm ? "svm" : "nearest-centroid"},
         {"svm", svm_config_to_json(c.svm)},
         {"slices", c.slices},
         {"seed", c.seed},
         {"gp",
          {{"restarts", c.gp.restarts},
           {"max_opt_iter", c.gp.max_opt_iter},
           {"isotropic", c.gp.isotropic}}}};
  if (c.rank.rank) {
    j["rank"] = *c.rank.rank;
  } else {
    j["rho"] = c.rank.rho;
  }
  if (c.gp.fixed_noise) j["gp"]["fixed_noise"] = *c.gp.fixed_noise;
  return j;
}

EmulatorConfig config_from_json(const json& j) {
  EmulatorConfig c;
  c.method = parse_method(j.at("method").get<std::string>());
  c.clusters = j.at("clusters").get<std::size_t>();
  c.eta = j.at("eta").get<double>();
  const auto cls = j.at("classifier").get<std::string>();
  require(cls == "svm" || cls == "nearest-centroid", ErrorKind::parse,
          "bundle: unknown classifier '" + cls + "'");
  c.classifier = cls == "svm" ? ClassifierKind::svm : ClassifierKind::nearest_centroid;
  c.svm = svm_config_from_json(j.at("svm"));
  c.slices = j.at("slices").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const json& gp = j.at("gp");
  c.gp.restarts = gp.at("restarts").get<std::size_t>();
  c.gp.max_opt_iter = gp.at("max_opt_iter").get<std::size_t>();
  c.gp.isotropic = gp.at("isotropic").get<bool>();
  if (gp.contains("fixed_noise")) c.gp.fixed_noise = gp.at("fixed_noise").get<double>();
  c.rank = j.contains("rank") ? RankSelection::forced(j.at("rank").get<std::size_t>())
                              : RankSelection::ratio(j.at("rho").get<double>());
  return c;
}

json classifier_to_json(const Classifier& c) {
  json j{{"dim", c.dim()}};
  switch (c.method()) {
    case Classifier::Method::constant:
      j["method"] = "constant";
      j["label"] = c.constant_label();
      break;
    case Classifier::Method::nearest_centroid:
      j["method"] = "nearest-centroid";
      j["labels"] = c.centroid_labels();
      j["centroids"] = mat_to_json(c.centroids());
      break;
    case Classifier::Method::svm: {
      const SvmModel& m = c.svm();
      j["method"] = "svm";
      j["config"] = svm_config_to_json(m.config);
      j["classes"] = m.classes;
      j["warnings"] = m.warnings;
      json machines = json::array();
      for (const BinarySvm& b : m.machines) {
        json mj{{"positive", b.positive},
                {"negative", b.negative},
                {"bias", b.bias},
                {"iterations", b.iterations},
                {"converged", b.converged}};
        if (m.config.kernel == SvmKernel::linear) {
          mj["weights"] = vec_to_json(b.weights);
        } else {
          mj["support_vectors"] = mat_to_json(b.support_vectors);
          mj["coefficients"] = vec_to_json(b.coefficients);
        }
        machines.push_back(std::move(mj));
      }
      j["machines"] = std::move(machines);
      break;
    }
  }
  return j;
}

Classifier classifier_from_json(const json& j) {
  const auto method = j.at("method").get<std::string>();
  const auto dim = j.at("dim").get<std::size_t>();
  if (method == "constant") return Classifier::constant(dim, j.at("label").get<int>());
  if (method == "nearest-centroid") {
    return Classifier::from_centroids(j.at("labels").get<std::vector<int>>(),
                                      mat_from_json(j.at("centroids")));
  }
  require(method == "svm", ErrorKind::parse, "bundle: unknown classifier method '" + method + "'");
  SvmModel m;
  m.config = svm_config_from_json(j.at("config"));
  m.dim = dim;
  m.classes = j.at("classes").get<std::vector<int>>();
  m.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const json& mj : j.at("machines")) {
    BinarySvm b;
    b.positive = mj.at("positive").get<int>();
    b.negative = mj.at("negative").get<int>();
    b.bias = mj.at("bias").get<double>();
    b.iterations = mj.at("iterations").get<std::size_t>();
    b.converged = mj.at("converged").get<bool>();
    if (m.config.kernel == SvmKernel::linear) {
      b.weights = vec_from_json(mj.at("weights"));
    } else {
      b.support_vectors = mat_from_json(mj.at("support_vectors"));
      b.coefficients = vec_from_json(mj.at("coefficients"));
    }
    m.machines.push_back(std::move(b));
  }
  return Classifier::from_svm(std::move(m));
}

json local_to_json(const LocalModel& m) {
  const KernelConfig& k = m.gp.kernel();
  return json{{"members", m.members},
              {"spectrum", vec_to_json(m.spectrum)},
              {"projection", mat_to_json(m.projection)},
              {"gp",
               {{"mean", m.gp.mean_constant()},
                {"signal_variance", k.signal_variance},
                {"lengthscales", vec_to_json(k.lengthscales)},
                {"noise_variance", k.noise_variance},
                {"inputs", mat_to_json(m.gp.inputs())},
                {"outputs", vec_to_json(m.gp.outputs())}}}};
}

LocalModel local_from_json(const json& j) {
  LocalModel m;
  m.members = j.at("members").get<std::vector<std::size_t>>();
  m.spectrum = vec_from_json(j.at("spectrum"));
  m.projection = mat_from_json(j.at("projection"));
  const json& gp = j.at("gp");
  KernelConfig k;
  k.signal_variance = gp.at("signal_variance").get<double>();
  k.lengthscales = vec_from_json(gp.at("lengthscales"));
  k.noise_variance = gp.at("noise_variance").get<double>();
  m.gp = GpModel::build(mat_from_json(gp.at("inputs")), vec_from_json(gp.at("outputs")),
                        gp.at("mean").get<double>(), std::move(k));
  return m;
}

}  // namespace

std::string emulator_to_json(const CasEmulator& emulator) {
  json locals = json::array();
  for (const LocalModel& m : emulator.locals()) locals.push_back(local_to_json(m));
  const json doc{{"format", kBundleFormat},
                 {"version", kBundleVersion},
                 {"dim", emulator.dim()},
                 {"config", config_to_json(emulator.config())},
                 {"labels", emulator.labels()},
                 {"classifier", classifier_to_json(emulator.classifier())},
                 {"clusters", std::move(locals)}};
  return doc.dump(1);
}

CasEmulator emulator_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("bundle: ") + e.what());
  }
  try {
    require(doc.value("format", std::string()) == kBundleFormat, ErrorKind::parse,
            "bundle: not a caslgp emulator bundle");
    const int version = doc.at("version").get<int>();
    require(version == kBundleVersion, ErrorKind::parse,
            "bundle: unsupported version " + std::to_string(version));
    std::vector<LocalModel> locals;
    for (const json& j : doc.at("clusters")) locals.push_back(local_from_json(j));
    return CasEmulator(config_from_json(doc.at("config")), doc.at("dim").get<std::size_t>(),
                       doc.at("labels").get<std::vector<int>>(),
                       classifier_from_json(doc.at("classifier")), std::move(locals));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("bundle: ") + e.what());
  }
}

void save_emulator(const CasEmulator& emulator, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
  out << emulator_to_json(emulator) << '\n';
  require(static_cast<bool>(out), ErrorKind::io, "write failed: " + path.string());
}

CasEmulator load_emulator(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return emulator_from_json(ss.str());
}

}  // namespace caslgp
