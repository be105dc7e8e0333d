#include "luqca/state.hpp"

#include <algorithm>

#include "luqca/linalg.hpp"

namespace luqca {

RegionState::RegionState(Region region, CellLayout layout, int cellState,
                         bool sparse, std::int64_t denseCap)
    : region_(std::move(region)),
      layout_(std::move(layout)),
      cells_(region_.cell_count()),
      sparse_(sparse) {
  if (cellState < 0 || cellState >= layout_.cell_dim())
    throw StructuralError("cell state out of range");
  const int q = layout_.quantum_part(cellState);
  if (layout_.has_classical()) {
    classical_.assign(cells_, layout_.unpack_classical(
                                  layout_.classical_part(cellState)));
  }
  if (!sparse_) {
    std::int64_t dim = 1;
    for (std::int64_t i = 0; i < cells_; ++i) {
      dim *= layout_.quantum_dim();
      if (dim > denseCap)
        throw ResourceError(
            "dense amplitude vector exceeds the cap; use the sparse "
            "representation");
    }
    dense_ = Vector::Zero(dim);
    std::int64_t idx = 0;
    for (std::int64_t i = 0; i < cells_; ++i)
      idx = idx * layout_.quantum_dim() + q;
    dense_(idx) = 1.0;
  } else {
    map_[BasisKey(cells_, q)] = 1.0;
  }
}

std::int64_t RegionState::quantum_space_dim() const {
  std::int64_t dim = 1;
  for (std::int64_t i = 0; i < cells_; ++i) {
    if (dim > (std::int64_t(1) << 62) / layout_.quantum_dim())
      throw ResourceError("quantum space dimension exceeds 2^62");
    dim *= layout_.quantum_dim();
  }
  return dim;
}

const std::vector<int>& RegionState::classical_of(
    std::int64_t cellIndex) const {
  return classical_.at(cellIndex);
}

void RegionState::set_classical(std::int64_t cellIndex,
                                std::vector<int> values) {
  classical_.at(cellIndex) = std::move(values);
}

void RegionState::check_key(const BasisKey& key) const {
  if (static_cast<std::int64_t>(key.size()) != cells_)
    throw StructuralError("basis key arity mismatch");
  for (int v : key)
    if (v < 0 || v >= layout_.quantum_dim())
      throw StructuralError("basis key value out of range");
}

Complex RegionState::amplitude(const BasisKey& key) const {
  check_key(key);
  if (sparse_) {
    auto it = map_.find(key);
    return it == map_.end() ? Complex(0, 0) : it->second;
  }
  std::int64_t idx = 0;
  for (int v : key) idx = idx * layout_.quantum_dim() + v;
  return dense_(idx);
}

void RegionState::set_amplitude(const BasisKey& key, Complex value) {
  check_key(key);
  if (sparse_) {
    if (value == Complex(0, 0))
      map_.erase(key);
    else
      map_[key] = value;
    return;
  }
  std::int64_t idx = 0;
  for (int v : key) idx = idx * layout_.quantum_dim() + v;
  dense_(idx) = value;
}

void RegionState::clear_amplitudes() {
  if (sparse_)
    map_.clear();
  else
    dense_.setZero();
}

double RegionState::norm() const {
  if (!sparse_) return dense_.norm();
  double sq = 0.0;
  for (const auto& [k, v] : map_) sq += std::norm(v);
  return std::sqrt(sq);
}

void RegionState::scale(Complex factor) {
  if (sparse_) {
    for (auto& [k, v] : map_) v *= factor;
  } else {
    dense_ *= factor;
  }
}

const Vector& RegionState::dense_amplitudes() const {
  if (sparse_) throw StructuralError("state is sparse");
  return dense_;
}

Vector& RegionState::dense_amplitudes() {
  if (sparse_) throw StructuralError("state is sparse");
  return dense_;
}

const std::map<BasisKey, Complex>& RegionState::sparse_amplitudes() const {
  if (!sparse_) throw StructuralError("state is dense");
  return map_;
}

std::map<BasisKey, Complex>& RegionState::sparse_amplitudes() {
  if (!sparse_) throw StructuralError("state is dense");
  return map_;
}

void RegionState::apply_quantum(const Matrix& op,
                                const std::vector<std::int64_t>& cellIndices) {
  const int qdim = layout_.quantum_dim();
  std::int64_t sdim = 1;
  for (std::size_t i = 0; i < cellIndices.size(); ++i) sdim *= qdim;
  if (op.rows() != sdim || op.cols() != sdim)
    throw StructuralError("apply_quantum: operator dimension mismatch");

  if (!sparse_) {
    std::vector<int> dims(cells_, qdim);
    std::vector<int> pos(cellIndices.begin(), cellIndices.end());
    apply_on_factors(dense_, op, pos, dims);
    return;
  }

  // group entries by their non-support values, multiply each group through
  std::map<BasisKey, std::map<std::int64_t, Complex>> groups;
  for (const auto& [key, amp] : map_) {
    BasisKey rest = key;
    std::int64_t s = 0;
    for (std::int64_t c : cellIndices) {
      s = s * qdim + key[c];
      rest[c] = 0;
    }
    groups[std::move(rest)][s] += amp;
  }
  map_.clear();
  std::vector<int> digits(cellIndices.size());
  for (auto& [rest, xs] : groups) {
    std::map<std::int64_t, Complex> ys;
    for (const auto& [sin, amp] : xs) {
      for (std::int64_t sout = 0; sout < sdim; ++sout) {
        Complex v = op(sout, sin);
        if (v != Complex(0, 0)) ys[sout] += amp * v;
      }
    }
    for (const auto& [sout, amp] : ys) {
      if (std::abs(amp) < 1e-300) continue;
      BasisKey key = rest;
      std::int64_t rem = sout;
      for (std::size_t k = cellIndices.size(); k-- > 0;) {
        key[cellIndices[k]] = static_cast<int>(rem % qdim);
        rem /= qdim;
      }
      map_[std::move(key)] += amp;
    }
  }
}

RegionState RegionState::to_dense(std::int64_t cap) const {
  if (!sparse_) return *this;
  std::int64_t dim = 1;
  for (std::int64_t i = 0; i < cells_; ++i) {
    dim *= layout_.quantum_dim();
    if (dim > cap) throw ResourceError("dense conversion exceeds cap");
  }
  RegionState out = *this;
  out.sparse_ = false;
  out.map_.clear();
  out.dense_ = Vector::Zero(dim);
  for (const auto& [key, amp] : map_) {
    std::int64_t idx = 0;
    for (int v : key) idx = idx * layout_.quantum_dim() + v;
    out.dense_(idx) = amp;
  }
  return out;
}

RegionState RegionState::to_sparse() const {
  if (sparse_) return *this;
  RegionState out = *this;
  out.sparse_ = true;
  out.dense_.resize(0);
  const int qdim = layout_.quantum_dim();
  for (std::int64_t idx = 0; idx < dense_.size(); ++idx) {
    if (dense_(idx) == Complex(0, 0)) continue;
    BasisKey key(cells_);
    std::int64_t rem = idx;
    for (std::int64_t i = cells_ - 1; i >= 0; --i) {
      key[i] = static_cast<int>(rem % qdim);
      rem /= qdim;
    }
    out.map_[std::move(key)] = dense_(idx);
  }
  return out;
}

Vector RegionState::full_state_vector(std::int64_t cap) const {
  std::int64_t dim = 1;
  for (std::int64_t i = 0; i < cells_; ++i) {
    dim *= layout_.cell_dim();
    if (dim > cap) throw ResourceError("full state vector exceeds cap");
  }
  Vector out = Vector::Zero(dim);
  auto place = [&](const BasisKey& key, Complex amp) {
    std::int64_t idx = 0;
    for (std::int64_t i = 0; i < cells_; ++i) {
      int c = layout_.has_classical() ? layout_.pack_classical(classical_[i])
                                      : 0;
      idx = idx * layout_.cell_dim() + layout_.merge(key[i], c);
    }
    out(idx) = amp;
  };
  if (sparse_) {
    for (const auto& [key, amp] : map_) place(key, amp);
  } else {
    const int qdim = layout_.quantum_dim();
    for (std::int64_t idx = 0; idx < dense_.size(); ++idx) {
      if (dense_(idx) == Complex(0, 0)) continue;
      BasisKey key(cells_);
      std::int64_t rem = idx;
      for (std::int64_t i = cells_ - 1; i >= 0; --i) {
        key[i] = static_cast<int>(rem % qdim);
        rem /= qdim;
      }
      place(key, dense_(idx));
    }
  }
  return out;
}

Matrix RegionState::reduced_density(
    const std::vector<std::int64_t>& cellIndices) const {
  const int qdim = layout_.quantum_dim();
  std::int64_t keepQ = 1, keepFull = 1;
  for (std::size_t i = 0; i < cellIndices.size(); ++i) {
    keepQ *= qdim;
    keepFull *= layout_.cell_dim();
    if (keepFull > (std::int64_t(1) << 22))
      throw ResourceError("reduced density matrix too large");
  }

  Matrix rhoQ;
  if (!sparse_) {
    std::vector<int> dims(cells_, qdim);
    std::vector<int> keep(cellIndices.begin(), cellIndices.end());
    if (!std::is_sorted(keep.begin(), keep.end()))
      throw StructuralError("reduced_density: cells must be ascending");
    rhoQ = partial_trace(dense_, keep, dims);
  } else {
    // group by the traced-out values
    rhoQ = Matrix::Zero(keepQ, keepQ);
    std::map<BasisKey, std::map<std::int64_t, Complex>> groups;
    for (const auto& [key, amp] : map_) {
      BasisKey rest = key;
      std::int64_t s = 0;
      for (std::int64_t c : cellIndices) {
        s = s * qdim + key[c];
        rest[c] = 0;
      }
      groups[std::move(rest)][s] += amp;
    }
    for (const auto& [rest, xs] : groups)
      for (const auto& [si, vi] : xs)
        for (const auto& [sj, vj] : xs) rhoQ(si, sj) += vi * std::conj(vj);
  }

  if (!layout_.has_classical() && layout_.cell_dim() == qdim) return rhoQ;

  // embed the definite classical values
  Matrix rho = Matrix::Zero(keepFull, keepFull);
  const int n = static_cast<int>(cellIndices.size());
  std::vector<int> cfg(n);
  for (int i = 0; i < n; ++i)
    cfg[i] = layout_.pack_classical(classical_[cellIndices[i]]);
  for (std::int64_t qi = 0; qi < keepQ; ++qi) {
    for (std::int64_t qj = 0; qj < keepQ; ++qj) {
      if (rhoQ(qi, qj) == Complex(0, 0)) continue;
      std::int64_t row = 0, col = 0, ri = qi, rj = qj;
      std::vector<int> di(n), dj(n);
      for (int i = n - 1; i >= 0; --i) {
        di[i] = static_cast<int>(ri % qdim);
        ri /= qdim;
        dj[i] = static_cast<int>(rj % qdim);
        rj /= qdim;
      }
      for (int i = 0; i < n; ++i) {
        row = row * layout_.cell_dim() + layout_.merge(di[i], cfg[i]);
        col = col * layout_.cell_dim() + layout_.merge(dj[i], cfg[i]);
      }
      rho(row, col) = rhoQ(qi, qj);
    }
  }
  return rho;
}

RegionState RegionState::translated(const Coord& shift) const {
  if (region_.boundary() != BoundaryMode::Torus)
    throw StructuralError("translation requires a torus region");
  RegionState out = *this;
  out.clear_amplitudes();
  std::vector<std::int64_t> src(cells_);
  for (std::int64_t i = 0; i < cells_; ++i) {
    Coord c = region_.coord_of(i);
    src[i] = region_.index_of(region_.wrap(coord_sub(c, shift)));
    if (has_classical()) out.classical_[i] = classical_[src[i]];
  }
  auto move_key = [&](const BasisKey& key) {
    BasisKey nk(cells_);
    for (std::int64_t i = 0; i < cells_; ++i) nk[i] = key[src[i]];
    return nk;
  };
  if (sparse_) {
    for (const auto& [key, amp] : map_) out.map_[move_key(key)] = amp;
  } else {
    const int qdim = layout_.quantum_dim();
    for (std::int64_t idx = 0; idx < dense_.size(); ++idx) {
      if (dense_(idx) == Complex(0, 0)) continue;
      BasisKey key(cells_);
      std::int64_t rem = idx;
      for (std::int64_t i = cells_ - 1; i >= 0; --i) {
        key[i] = static_cast<int>(rem % qdim);
        rem /= qdim;
      }
      BasisKey nk = move_key(key);
      std::int64_t nidx = 0;
      for (int v : nk) nidx = nidx * qdim + v;
      out.dense_(nidx) = dense_(idx);
    }
  }
  return out;
}

double RegionState::max_deviation(const RegionState& other) const {
  if (!(region_ == other.region_))
    throw StructuralError("max_deviation: region mismatch");
  if (!sparse_ && !other.sparse_)
    return (dense_ - other.dense_).cwiseAbs().maxCoeff();
  const RegionState a = to_sparse();
  const RegionState b = other.to_sparse();
  double dev = 0.0;
  for (const auto& [key, amp] : a.map_)
    dev = std::max(dev, std::abs(amp - b.amplitude(key)));
  for (const auto& [key, amp] : b.map_)
    dev = std::max(dev, std::abs(amp - a.amplitude(key)));
  return dev;
}

// ---------------------------------------------------------------------------
// init_region

RegionState init_region(const BlockInitializer& init, const Region& region,
                        const CellLayout& layout, std::int64_t denseCap) {
  const int fill = init.default_cell_state();
  if (layout.has_classical() && !init.blocks().empty())
    throw StructuralError(
        "block initializers with entangled blocks require an all-quantum "
        "layout");

  std::int64_t qdim = 1;
  bool dense = true;
  for (std::int64_t i = 0; i < region.cell_count(); ++i) {
    qdim *= layout.quantum_dim();
    if (qdim > denseCap) {
      dense = false;
      break;
    }
  }
  RegionState state(region, layout, fill, !dense, denseCap);
  if (init.blocks().empty()) return state;

  const int k = init.block_side();
  const int d = region.dimension();
  std::int64_t blockCells = 1;
  for (int a = 0; a < d; ++a) blockCells *= k;

  // entries of the product state: start from the fill product and graft the
  // blocks in
  state.clear_amplitudes();
  struct Entry {
    BasisKey key;
    Complex amp;
  };
  std::vector<Entry> entries{
      {BasisKey(region.cell_count(), layout.quantum_part(fill)), Complex(1, 0)}};

  for (const auto& [blockCoord, vec] : init.blocks()) {
    Coord low(d), high(d);
    for (int a = 0; a < d; ++a) {
      low[a] = blockCoord[a] * k;
      high[a] = low[a] + k - 1;
    }
    if (!region.contains(low) || !region.contains(high))
      throw StructuralError("block does not fit inside the region");
    std::int64_t want = 1;
    for (std::int64_t i = 0; i < blockCells; ++i) want *= layout.cell_dim();
    if (vec.size() != want)
      throw StructuralError("block state has the wrong dimension");

    // region cell indices of the block cells, lexicographic within the block
    std::vector<std::int64_t> cellIdx;
    Coord c = low;
    for (std::int64_t i = 0; i < blockCells; ++i) {
      cellIdx.push_back(region.index_of(c));
      for (int a = d - 1; a >= 0; --a) {
        if (++c[a] <= high[a]) break;
        c[a] = low[a];
      }
    }

    std::vector<Entry> next;
    for (const auto& e : entries) {
      for (std::int64_t s = 0; s < vec.size(); ++s) {
        if (vec(s) == Complex(0, 0)) continue;
        Entry ne = e;
        ne.amp *= vec(s);
        std::int64_t rem = s;
        for (std::int64_t i = blockCells - 1; i >= 0; --i) {
          int cellState = static_cast<int>(rem % layout.cell_dim());
          rem /= layout.cell_dim();
          ne.key[cellIdx[i]] = layout.quantum_part(cellState);
        }
        next.push_back(std::move(ne));
      }
      if (next.size() > (std::size_t(1) << 22))
        throw ResourceError("block initializer support too large");
    }
    entries = std::move(next);
  }

  for (const auto& e : entries)
    state.set_amplitude(e.key, state.amplitude(e.key) + e.amp);
  return state;
}

}  // namespace luqca
