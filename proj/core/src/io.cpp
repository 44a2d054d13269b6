#include "gramentropy/io.hpp"

#include "gramentropy/errors.hpp"

#include <cerrno>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace gramentropy {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  if (t.empty()) {
    std::ostringstream os;
    os << "line " << line << ": empty field";
    throw InputError(os.str());
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    std::ostringstream os;
    os << "line " << line << ": cannot parse '" << t << "' as a number";
    throw InputError(os.str());
  }
  return v;
}

std::vector<std::vector<double>> read_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(parse_real(field, lineno));
    if (!line.empty() && line.back() == ',') row.push_back(parse_real("", lineno));
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "line " << lineno << ": expected " << rows.front().size() << " fields, got "
         << row.size();
      throw InputError(os.str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

template <typename F>
auto with_path_context(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Matrix read_matrix_csv(std::istream& in) {
  const auto rows = read_rows(in);
  if (rows.empty()) throw InputError("empty matrix file");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  return with_path_context(path, [&] {
    auto in = open_in(path);
    return read_matrix_csv(in);
  });
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  write_matrix_csv(out, m);
}

Dataset read_dataset_csv(std::istream& in) {
  const Matrix raw = read_matrix_csv(in);
  if (raw.cols() < 2) throw InputError("dataset needs at least one feature and a label column");
  std::vector<Label> labels;
  labels.reserve(static_cast<std::size_t>(raw.rows()));
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    const double l = raw(i, raw.cols() - 1);
    if (l != std::floor(l) || l < 0 || l > 1e9) {
      std::ostringstream os;
      os << "row " << i + 1 << ": label " << l << " is not a nonnegative integer";
      throw InputError(os.str());
    }
    labels.push_back(static_cast<Label>(l));
  }
  return Dataset(raw.leftCols(raw.cols() - 1), std::move(labels));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  return with_path_context(path, [&] {
    auto in = open_in(path);
    return read_dataset_csv(in);
  });
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const Matrix& x = data.features();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << format_real(x(i, j)) << ',';
    out << data.labels()[static_cast<std::size_t>(i)] << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  auto out = open_out(path);
  write_dataset_csv(out, data);
}

void save_model(std::ostream& out, const MetricModel& model) {
  out << "gramentropy-model 1\n"
      << "d " << model.input_dim() << '\n'
      << "p " << model.p() << '\n'
      << "alpha " << format_real(model.alpha().value()) << '\n'
      << "sigma " << format_real(model.sigma()) << '\n';
  write_matrix_csv(out, model.projection());
}

void save_model(const std::filesystem::path& path, const MetricModel& model) {
  auto out = open_out(path);
  save_model(out, model);
}

MetricModel load_model(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "gramentropy-model" || version != 1) {
    throw InputError("not a gramentropy model file");
  }
  auto field = [&](const char* key) {
    std::string k;
    std::string v;
    if (!(in >> k >> v) || k != key) {
      throw InputError(std::string("model file: expected field '") + key + "'");
    }
    return parse_real(v, 0);
  };
  const double d = field("d");
  const double p = field("p");
  const double alpha = field("alpha");
  const double sigma = field("sigma");
  if (d < 1 || p < 1 || d != std::floor(d) || p != std::floor(p)) {
    throw InputError("model file: invalid dimensions");
  }
  const Matrix a = read_matrix_csv(in);
  if (a.rows() != static_cast<Eigen::Index>(d) || a.cols() != static_cast<Eigen::Index>(p)) {
    throw InputError("model file: projection shape does not match header");
  }
  return MetricModel(a, EntropyOrder(alpha), sigma);
}

MetricModel load_model(const std::filesystem::path& path) {
  return with_path_context(path, [&] {
    auto in = open_in(path);
    return load_model(in);
  });
}

}  // namespace gramentropy
