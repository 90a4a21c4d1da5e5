#pragma once

// Text formats:
//   features     CSV, one sample per row, no header, finite reals
//   labels       CSV lines "index,class"
//   truth        one class per line
//   predictions  one class per line
//   BOW          header "n M nnz", then "row col value" triplets (0-based)
//   eigen dump   header "n m", a line of m eigenvalues, then n rows of m
//                vector entries
// Blank lines and lines starting with '#' are skipped on input.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "l1ssl/graph.hpp"
#include "l1ssl/ssl.hpp"

namespace l1ssl::io {

FeatureMatrix read_features(std::istream& in);
FeatureMatrix read_features(const std::filesystem::path& path);

std::vector<LabelAssignment> read_labels(std::istream& in);
std::vector<LabelAssignment> read_labels(const std::filesystem::path& path);

std::vector<int> read_truth(std::istream& in);
std::vector<int> read_truth(const std::filesystem::path& path);

void write_predictions(std::ostream& out, std::span<const int> labels);

/// Dense n x M matrix from the triplet format. Duplicate (row, col) pairs
/// and out-of-range indices are parse errors.
DenseMatrix read_bow(std::istream& in);
DenseMatrix read_bow(const std::filesystem::path& path);

/// Writes entries with |value| > 1e-12 in row-major order, values in
/// shortest round-trip form.
void write_bow(std::ostream& out, const DenseMatrix& m);

void write_eigen_dump(std::ostream& out, const Vector& values, const DenseMatrix& vectors);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Writes `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace l1ssl::io
