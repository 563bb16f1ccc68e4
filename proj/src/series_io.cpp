#include "rumor/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rumor {

namespace {

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

std::string rows_to_csv(const Eigen::VectorXd& mean, const Eigen::VectorXd& stddev,
                        long long n_samples) {
  std::ostringstream out;
  out << "n,f_mean,f_std,n_samples\n";
  for (Eigen::Index n = 0; n < mean.size(); ++n) {
    out << n << ',' << format_double(mean(n)) << ',' << format_double(stddev(n)) << ','
        << n_samples << '\n';
  }
  return out.str();
}

}  // namespace

std::string series_to_csv(const EnsembleResult& ensemble) {
  return rows_to_csv(ensemble.mean.f, ensemble.f_std, ensemble.n_samples);
}

std::string series_to_csv(const BurnSeries& series) {
  return rows_to_csv(series.f, Eigen::VectorXd::Zero(series.f.size()), 1);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_series_csv(const std::string& path, const EnsembleResult& ensemble) {
  write_text_file(path, series_to_csv(ensemble));
}

void write_series_csv(const std::string& path, const BurnSeries& series) {
  write_text_file(path, series_to_csv(series));
}

BurnSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,f_mean", 0) != 0)
    throw std::runtime_error("series CSV missing header: " + path);

  std::vector<double> values;
  long long expected_n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) throw std::runtime_error("bad CSV row: " + line);
    if (std::stoll(cell) != expected_n)
      throw std::runtime_error("series CSV rows out of order: " + path);
    if (!std::getline(row, cell, ',')) throw std::runtime_error("bad CSV row: " + line);
    values.push_back(std::stod(cell));
    ++expected_n;
  }
  if (values.empty()) throw std::runtime_error("series CSV has no rows: " + path);

  BurnSeries series;
  series.f = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return series;
}

}  // namespace rumor
