#ifndef BPLS_DATASET_HPP
#define BPLS_DATASET_HPP

#include <string>
#include <vector>

#include "bpls/linalg.hpp"
#include "bpls/rng.hpp"

namespace bpls {

// Complete-case dataset: N x P predictors, N x R responses in original units.
struct RawDataset {
  Matrix X;
  Matrix Y;
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
  // Row indices (0-based, post-header) dropped at load time because of
  // missing cells.
  std::vector<int> dropped_rows;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
  Eigen::Index r() const { return Y.cols(); }

  RawDataset rows(const std::vector<int>& idx) const;
};

struct CsvLayout {
  std::vector<std::string> response_columns;
  char delimiter = ',';
};

// Header row required. Cells that are empty or "NA"/"NaN" mark the row as
// incomplete and the row is dropped (indices recorded); any other
// non-numeric cell is a ParseError with its (row, column) location.
RawDataset load_csv(const std::string& path, const CsvLayout& layout);

void write_csv(const std::string& path, const RawDataset& d, char delimiter = ',');

// Seeded shuffle, then contiguous blocks of near-equal size. The result is an
// exact partition of 0..n-1.
std::vector<std::vector<int>> make_folds(int n, int k, RngStream& rng);

// Complement of `test` in 0..n-1, order preserved.
std::vector<int> complement_indices(int n, const std::vector<int>& test);

}  // namespace bpls

#endif  // BPLS_DATASET_HPP
