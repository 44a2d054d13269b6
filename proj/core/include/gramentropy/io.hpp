#pragma once

#include "gramentropy/ceml.hpp"
#include "gramentropy/spectra.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace gramentropy {

/// Plain-text CSV, row-major, no header. Blank lines are skipped; every row
/// must have the same number of fields. Throws InputError when malformed.
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Writes with 17 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// One sample per row: features, then an integer label in the last column.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

/// Text model format:
///
///   gramentropy-model 1
///   d <d>
///   p <p>
///   alpha <alpha>
///   sigma <sigma>
///   <d rows of p comma-separated values>
///
/// Reals are written with 17 significant digits so load(save(m)) == m exactly.
void save_model(std::ostream& out, const MetricModel& model);
void save_model(const std::filesystem::path& path, const MetricModel& model);
MetricModel load_model(std::istream& in);
MetricModel load_model(const std::filesystem::path& path);

/// %.17g: enough digits to recover the exact double.
std::string format_real(double x);

}  // namespace gramentropy
