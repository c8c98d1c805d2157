#include "caslgp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>

#include "caslgp/errors.hpp"
#include "caslgp/random.hpp"

namespace caslgp {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
  }
  return fields;
}

double parse_real(std::string_view text, std::size_t line, std::size_t column) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParseError(line, "column " + std::to_string(column) + ": non-numeric cell '" +
                               std::string(text) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "column " + std::to_string(column) + ": non-finite value");
  }
  return value;
}

struct CsvLayout {
  std::size_t dim = 0;
  std::vector<std::size_t> x_columns;
  std::optional<std::size_t> y_column;
  std::vector<std::size_t> g_columns;
  std::size_t width = 0;
};

// Column names are x_<i>, y, g_<i>; x_ and g_ indices must run 1..d in order.
CsvLayout parse_header(std::string_view header) {
  CsvLayout layout;
  const auto names = split_fields(header);
  layout.width = names.size();
  for (std::size_t c = 0; c < names.size(); ++c) {
    const std::string_view name = names[c];
    if (name == "y") {
      if (layout.y_column) throw ParseError(1, "duplicate y column");
      layout.y_column = c;
      continue;
    }
    if (name.size() > 2 && (name[0] == 'x' || name[0] == 'g') && name[1] == '_') {
      std::size_t index = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 2, name.data() + name.size(), index);
      if (ec != std::errc() || ptr != name.data() + name.size()) {
        throw ParseError(1, "bad column name '" + std::string(name) + "'");
      }
      auto& columns = name[0] == 'x' ? layout.x_columns : layout.g_columns;
      if (index != columns.size() + 1) {
        throw ParseError(1, "column '" + std::string(name) + "' out of order");
      }
      columns.push_back(c);
      continue;
    }
    throw ParseError(1, "unknown column '" + std::string(name) + "'");
  }
  layout.dim = layout.x_columns.size();
  if (layout.dim == 0) throw ParseError(1, "no x_ columns in header");
  if (!layout.g_columns.empty() && layout.g_columns.size() != layout.dim) {
    throw ParseError(1, "gradient column count " + std::to_string(layout.g_columns.size()) +
                            " differs from input dimension " + std::to_string(layout.dim));
  }
  return layout;
}

template <typename RowFn>
CsvLayout read_csv(const std::filesystem::path& path, RowFn&& on_row) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header in '" + path.string() + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  const CsvLayout layout = parse_header(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != layout.width) {
      throw ParseError(line_no, "expected " + std::to_string(layout.width) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    on_row(layout, fields, line_no);
  }
  return layout;
}

Vector read_columns(const std::vector<std::string_view>& fields,
                    const std::vector<std::size_t>& columns, std::size_t line_no) {
  Vector v(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = parse_real(fields[columns[i]], line_no, columns[i] + 1);
  }
  return v;
}

}  // namespace

DataSet::DataSet(std::size_t dim, std::vector<Sample> samples)
    : dim_(dim), samples_(std::move(samples)) {
  require(dim > 0, ErrorKind::argument, "DataSet: dimension must be positive");
  has_gradients_ = !samples_.empty() && samples_.front().g.has_value();
  for (std::size_t n = 0; n < samples_.size(); ++n) {
    const Sample& s = samples_[n];
    const std::string where = "DataSet: sample " + std::to_string(n);
    require(static_cast<std::size_t>(s.x.size()) == dim_, ErrorKind::argument,
            where + " has input length " + std::to_string(s.x.size()) + ", expected " +
                std::to_string(dim_));
    require(s.g.has_value() == has_gradients_, ErrorKind::argument,
            where + ": gradients must be present on all samples or none");
    require(all_finite(s.x) && std::isfinite(s.y), ErrorKind::argument,
            where + " has non-finite entries");
    if (s.g) {
      require(static_cast<std::size_t>(s.g->size()) == dim_, ErrorKind::argument,
              where + " has gradient length " + std::to_string(s.g->size()));
      require(all_finite(*s.g), ErrorKind::argument, where + " has a non-finite gradient");
    }
  }
}

Matrix DataSet::inputs() const {
  Matrix X(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
  for (std::size_t n = 0; n < size(); ++n) X.row(static_cast<Eigen::Index>(n)) = samples_[n].x;
  return X;
}

Vector DataSet::outputs() const {
  Vector y(static_cast<Eigen::Index>(size()));
  for (std::size_t n = 0; n < size(); ++n) y[static_cast<Eigen::Index>(n)] = samples_[n].y;
  return y;
}

Matrix DataSet::gradients() const {
  require(has_gradients_, ErrorKind::contract, "dataset carries no gradients");
  Matrix G(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
  for (std::size_t n = 0; n < size(); ++n) G.row(static_cast<Eigen::Index>(n)) = *samples_[n].g;
  return G;
}

DataSet DataSet::subset(std::span<const std::size_t> indices) const {
  std::vector<Sample> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) {
    require(i < size(), ErrorKind::argument, "DataSet::subset: index out of range");
    picked.push_back(samples_[i]);
  }
  DataSet out(dim_, std::move(picked));
  out.has_gradients_ = has_gradients_;
  return out;
}

bool operator==(const DataSet& a, const DataSet& b) {
  if (a.dim_ != b.dim_ || a.has_gradients_ != b.has_gradients_ || a.size() != b.size()) {
    return false;
  }
  for (std::size_t n = 0; n < a.size(); ++n) {
    const Sample& s = a.samples_[n];
    const Sample& t = b.samples_[n];
    if (s.y != t.y || s.x != t.x) return false;
    if (s.g && *s.g != *t.g) return false;
  }
  return true;
}

std::string format_real(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error(ErrorKind::io, "cannot format real value");
  return std::string(buffer, ptr);
}

DataSet load_dataset(const std::filesystem::path& path) {
  std::vector<Sample> samples;
  const CsvLayout layout = read_csv(
      path, [&](const CsvLayout& lay, const std::vector<std::string_view>& fields,
                std::size_t line_no) {
        if (!lay.y_column) throw ParseError(1, "header has no y column");
        Sample s;
        s.x = read_columns(fields, lay.x_columns, line_no);
        s.y = parse_real(fields[*lay.y_column], line_no, *lay.y_column + 1);
        if (!lay.g_columns.empty()) s.g = read_columns(fields, lay.g_columns, line_no);
        samples.push_back(std::move(s));
      });
  if (!layout.y_column) throw ParseError(1, "header has no y column");
  DataSet out(layout.dim, std::move(samples));
  return out;
}

std::vector<Vector> load_inputs(const std::filesystem::path& path) {
  std::vector<Vector> points;
  read_csv(path, [&](const CsvLayout& lay, const std::vector<std::string_view>& fields,
                     std::size_t line_no) {
    points.push_back(read_columns(fields, lay.x_columns, line_no));
  });
  return points;
}

void save_dataset(const DataSet& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  const std::size_t d = dataset.dim();
  for (std::size_t i = 1; i <= d; ++i) out << "x_" << i << ',';
  out << 'y';
  if (dataset.has_gradients()) {
    for (std::size_t i = 1; i <= d; ++i) out << ",g_" << i;
  }
  out << '\n';
  for (const Sample& s : dataset.samples()) {
    for (Eigen::Index i = 0; i < s.x.size(); ++i) out << format_real(s.x[i]) << ',';
    out << format_real(s.y);
    if (s.g) {
      for (Eigen::Index i = 0; i < s.g->size(); ++i) out << ',' << format_real((*s.g)[i]);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

std::pair<DataSet, DataSet> split(const DataSet& dataset, double fraction, std::uint64_t seed) {
  require(!dataset.empty(), ErrorKind::argument, "split: empty dataset");
  require(fraction > 0.0 && fraction < 1.0, ErrorKind::argument,
          "split: fraction must lie in (0, 1)");
  const std::size_t n = dataset.size();
  const auto first_size =
      std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::size_t> first(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first_size));
  std::vector<std::size_t> second(order.begin() + static_cast<std::ptrdiff_t>(first_size), order.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {dataset.subset(first), dataset.subset(second)};
}

}  // namespace caslgp
