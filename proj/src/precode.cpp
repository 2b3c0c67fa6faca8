#include "codedchain/precode.hpp"

#include <stdexcept>
#include <unordered_set>

namespace codedchain {

Precode::Precode(unsigned bits, std::uint32_t w, std::uint32_t wbar)
    : field_(GaloisField::get(bits)), bits_(bits), w_(w), wbar_(wbar) {
  if (w < 1) throw std::invalid_argument("Precode: need at least one source");
  if (wbar < w) throw std::invalid_argument("Precode: output count below source count");
  // Evaluation points 0..wbar-1 must be distinct field elements.
  if (wbar > field_.order())
    throw std::invalid_argument("Precode: output count exceeds field order");

  std::vector<std::uint32_t> source_points(w);
  for (std::uint32_t i = 0; i < w; ++i) source_points[i] = i;

  parity_rows_.reserve(wbar - w);
  for (std::uint32_t x = w; x < wbar; ++x)
    parity_rows_.push_back(lagrange_row(source_points, x));
}

std::vector<std::uint32_t> Precode::lagrange_row(
    const std::vector<std::uint32_t>& xs, std::uint32_t x) const {
  const std::size_t n = xs.size();
  std::vector<std::uint32_t> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t num = 1;
    std::uint32_t den = 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      num = field_.mul(num, x ^ xs[k]);        // subtraction is XOR
      den = field_.mul(den, xs[i] ^ xs[k]);
    }
    row[i] = field_.div(num, den);
  }
  return row;
}

std::vector<SymbolVector> Precode::encode(
    const std::vector<SymbolVector>& sources) const {
  if (sources.size() != w_)
    throw std::invalid_argument("Precode::encode: wrong source count");
  const std::size_t s = sources.empty() ? 0 : sources.front().size();
  for (const auto& v : sources)
    if (v.size() != s) throw std::invalid_argument("Precode::encode: ragged sources");

  std::vector<SymbolVector> out;
  out.reserve(wbar_);
  for (const auto& v : sources) out.push_back(v);
  for (const auto& row : parity_rows_) {
    SymbolVector parity(s, 0);
    for (std::uint32_t i = 0; i < w_; ++i) {
      const std::uint32_t coef = row[i];
      if (coef == 0) continue;
      const SymbolVector& src = sources[i];
      for (std::size_t pos = 0; pos < s; ++pos)
        parity[pos] ^= static_cast<Symbol>(field_.mul(coef, src[pos]));
    }
    out.push_back(std::move(parity));
  }
  return out;
}

std::optional<std::vector<SymbolVector>> Precode::erasure_decode(
    const std::vector<std::uint32_t>& indices,
    const std::vector<const SymbolVector*>& values) const {
  if (indices.size() != values.size())
    throw std::invalid_argument("Precode::erasure_decode: index/value mismatch");

  // Keep the first w distinct in-range outputs, in input order.
  std::vector<std::uint32_t> points;   // 0-based evaluation points
  std::vector<const SymbolVector*> samples;
  std::unordered_set<std::uint32_t> seen;
  for (std::size_t i = 0; i < indices.size() && points.size() < w_; ++i) {
    const std::uint32_t idx = indices[i];
    if (idx < 1 || idx > wbar_)
      throw std::out_of_range("Precode::erasure_decode: output index out of range");
    if (!seen.insert(idx).second) continue;
    points.push_back(idx - 1);
    samples.push_back(values[i]);
  }
  if (points.size() < w_) return std::nullopt;

  const std::size_t s = samples.empty() ? 0 : samples.front()->size();
  for (const auto* v : samples)
    if (v->size() != s)
      throw std::invalid_argument("Precode::erasure_decode: ragged samples");

  std::vector<SymbolVector> out(w_);
  for (std::uint32_t t = 0; t < w_; ++t) {
    // Passthrough when the systematic output at point t is among samples.
    bool direct = false;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j] == t) {
        out[t] = *samples[j];
        direct = true;
        break;
      }
    }
    if (direct) continue;

    const std::vector<std::uint32_t> row = lagrange_row(points, t);
    SymbolVector rec(s, 0);
    for (std::size_t j = 0; j < points.size(); ++j) {
      const std::uint32_t coef = row[j];
      if (coef == 0) continue;
      const SymbolVector& y = *samples[j];
      for (std::size_t pos = 0; pos < s; ++pos)
        rec[pos] ^= static_cast<Symbol>(field_.mul(coef, y[pos]));
    }
    out[t] = std::move(rec);
  }
  return out;
}

}  // namespace codedchain
