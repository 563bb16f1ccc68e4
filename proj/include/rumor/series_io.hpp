#pragma once

#include <string>

#include "rumor/spread.hpp"

namespace rumor {

/// CSV with header `n,f_mean,f_std,n_samples`, one row per iteration.
/// Doubles are written with 17 significant digits so files round-trip
/// bit-exactly.
std::string series_to_csv(const EnsembleResult& ensemble);
std::string series_to_csv(const BurnSeries& series);  // single run: std 0, 1 sample

void write_series_csv(const std::string& path, const EnsembleResult& ensemble);
void write_series_csv(const std::string& path, const BurnSeries& series);

/// Reads the f_mean column back into a series (normalizer is not part of
/// the CSV schema and is left at 0).
BurnSeries read_series_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace rumor
