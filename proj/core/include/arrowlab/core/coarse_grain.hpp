#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace arrowlab::core {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Partition of the box [0,width] x [0,height] into square cells.
///
/// Cells are numbered row-major: index = column + columns() * row. The
/// far box edges belong to the last column/row so every in-box point maps
/// to exactly one cell.
class CoarseGraining {
 public:
  CoarseGraining(double cell_size, double width, double height);

  /// cells_x x cells_y grid spanning the box exactly (cell width = width / cells_x).
  /// Requires width / cells_x == height / cells_y.
  static CoarseGraining uniform_grid(double width, double height, std::size_t cells_x, std::size_t cells_y);

  double cell_size() const { return cell_size_; }
  double width() const { return width_; }
  double height() const { return height_; }
  std::size_t columns() const { return columns_; }
  std::size_t rows() const { return rows_; }
  std::size_t cell_count() const { return columns_ * rows_; }

  bool contains(Point2 p) const;
  /// Throws DomainError for points outside the box.
  std::size_t cell_of(Point2 p) const;

 private:
  double cell_size_;
  double width_;
  double height_;
  std::size_t columns_;
  std::size_t rows_;
};

/// Occupation counts over the cells of a graining.
class Histogram {
 public:
  explicit Histogram(std::size_t cell_count) : counts_(cell_count, 0) {}
  explicit Histogram(std::vector<std::uint64_t> counts);

  void add(std::size_t cell, std::uint64_t n = 1);

  std::span<const std::uint64_t> counts() const { return counts_; }
  std::uint64_t count(std::size_t cell) const { return counts_.at(cell); }
  std::uint64_t total() const { return total_; }
  std::size_t cell_count() const { return counts_.size(); }

  /// Merges groups of `factor` consecutive cell indices into one cell.
  Histogram merged(std::size_t factor) const;

  /// CSV rows `cell_index,count` with a header line.
  void write_csv(std::ostream& out) const;

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Histogram of positions over the cells. Throws DomainError naming the
/// first position that lies outside the box.
Histogram coarse_grain(std::span<const Point2> positions, const CoarseGraining& graining);

/// Shannon entropy (nats) of the occupation fractions. Throws DomainError
/// for an empty histogram.
double entropy(const Histogram& h);

/// Shannon entropy (nats) of a probability vector; zero entries are skipped.
double shannon_entropy(std::span<const double> probabilities);

}  // namespace arrowlab::core
