#include "arrowlab/core/coarse_grain.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::core {

CoarseGraining::CoarseGraining(double cell_size, double width, double height)
    : cell_size_(cell_size), width_(width), height_(height) {
  if (!(cell_size > 0.0) || !(width > 0.0) || !(height > 0.0)) {
    throw DomainError("coarse graining needs positive cell size and box dimensions");
  }
  columns_ = static_cast<std::size_t>(std::ceil(width / cell_size));
  rows_ = static_cast<std::size_t>(std::ceil(height / cell_size));
}

CoarseGraining CoarseGraining::uniform_grid(double width, double height, std::size_t cells_x, std::size_t cells_y) {
  if (cells_x == 0 || cells_y == 0) throw DomainError("uniform_grid: zero cells");
  const double cx = width / static_cast<double>(cells_x);
  const double cy = height / static_cast<double>(cells_y);
  if (cx != cy) throw DomainError(fmt::format("uniform_grid: cells are not square ({} vs {})", cx, cy));
  return CoarseGraining(cx, width, height);
}

bool CoarseGraining::contains(Point2 p) const {
  return p.x >= 0.0 && p.x <= width_ && p.y >= 0.0 && p.y <= height_;
}

std::size_t CoarseGraining::cell_of(Point2 p) const {
  if (!contains(p)) throw DomainError(fmt::format("point ({}, {}) outside the box", p.x, p.y));
  auto col = static_cast<std::size_t>(std::floor(p.x / cell_size_));
  auto row = static_cast<std::size_t>(std::floor(p.y / cell_size_));
  if (col >= columns_) col = columns_ - 1;
  if (row >= rows_) row = rows_ - 1;
  return col + columns_ * row;
}

Histogram::Histogram(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  for (auto c : counts_) total_ += c;
}

void Histogram::add(std::size_t cell, std::uint64_t n) {
  if (cell >= counts_.size()) throw DomainError(fmt::format("cell {} out of range ({} cells)", cell, counts_.size()));
  counts_[cell] += n;
  total_ += n;
}

Histogram Histogram::merged(std::size_t factor) const {
  if (factor == 0) throw DomainError("merge factor must be positive");
  Histogram out((counts_.size() + factor - 1) / factor);
  for (std::size_t i = 0; i < counts_.size(); ++i) out.add(i / factor, counts_[i]);
  return out;
}

void Histogram::write_csv(std::ostream& out) const {
  out << "cell_index,count\n";
  for (std::size_t i = 0; i < counts_.size(); ++i) out << i << ',' << counts_[i] << '\n';
}

Histogram coarse_grain(std::span<const Point2> positions, const CoarseGraining& graining) {
  Histogram h(graining.cell_count());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!graining.contains(positions[i])) {
      throw DomainError(fmt::format("coarse_grain: position {} ({}, {}) outside the {}x{} box", i, positions[i].x,
                                    positions[i].y, graining.width(), graining.height()));
    }
    h.add(graining.cell_of(positions[i]));
  }
  return h;
}

double entropy(const Histogram& h) {
  if (h.total() == 0) throw DomainError("entropy of an empty histogram");
  const double n = static_cast<double>(h.total());
  double s = 0.0;
  for (auto c : h.counts()) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    s -= p * std::log(p);
  }
  return s;
}

double shannon_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace arrowlab::core
