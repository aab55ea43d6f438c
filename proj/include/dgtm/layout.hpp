#pragma once

#include "dgtm/error.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dgtm {

#ifdef DGTM_WIDE_PRECISION
using real_t = double;
#else
using real_t = float;
#endif

inline constexpr int kDefaultAlign = 16;
inline constexpr double kDefaultWasteThreshold = 0.10;
inline constexpr int kDefaultMaxMicroblock = 16;

/// Smallest multiple of `align` that is >= n.
constexpr std::size_t padded_size(std::size_t n, std::size_t align) {
  return (n + align - 1) / align * align;
}

/// Padding waste (mb_size - Np*mb)/mb_size of a microblock of `mb` elements.
double waste_fraction(int Np, int align, int mb);

/// Microblock granularity. Candidates are the powers of two up to mb_max;
/// the first whose waste is within `waste_threshold` wins, otherwise the
/// least wasteful one (ties go to the smaller count).
int choose_microblock(int Np, int align = kDefaultAlign,
                      double waste_threshold = kDefaultWasteThreshold,
                      int mb_max = kDefaultMaxMicroblock);

/// Padded, microblocked storage description shared by all fields.
///
/// Elements inside a microblock are contiguous at stride Np; microblocks
/// sit at stride mb_size. K is padded up to K_pad with ghost elements.
struct LayoutSpec {
  int Np = 0;
  int align = kDefaultAlign;
  int mb_elems = 1;
  int mb_size = 0;
  int K = 0;
  int K_pad = 0;

  int num_microblocks() const { return K_pad / mb_elems; }
  std::size_t storage_size() const {
    return static_cast<std::size_t>(num_microblocks()) * mb_size;
  }
  /// Storage offset of (element k, local DOF n). Throws on out-of-range input.
  std::size_t dof_index(int k, int n) const;
  /// Same as dof_index without bounds checks; k may be a ghost element.
  std::size_t offset(int k, int n) const {
    return static_cast<std::size_t>(k / mb_elems) * mb_size +
           static_cast<std::size_t>(k % mb_elems) * Np + n;
  }
  bool operator==(const LayoutSpec&) const = default;
};

/// Builds a layout; mb_elems = nullopt selects choose_microblock().
LayoutSpec make_layout(int Np, int K, int align = kDefaultAlign,
                       std::optional<int> mb_elems = std::nullopt,
                       double waste_threshold = kDefaultWasteThreshold);

inline std::size_t dof_index(const LayoutSpec& layout, int k, int n) {
  return layout.dof_index(k, n);
}

enum class Field { Hx = 0, Hy = 1, Ez = 2 };
inline constexpr std::array<const char*, 3> kFieldNames = {"Hx", "Hy", "Ez"};

/// Hx, Hy, Ez stored in one shared layout. Padding and ghost slots are zero.
template <class Real>
struct FieldSet {
  LayoutSpec layout;
  std::array<std::vector<Real>, 3> data;

  FieldSet() = default;
  explicit FieldSet(const LayoutSpec& spec) : layout(spec) {
    for (auto& d : data) d.assign(spec.storage_size(), Real(0));
  }

  std::vector<Real>& operator[](Field f) { return data[static_cast<int>(f)]; }
  const std::vector<Real>& operator[](Field f) const { return data[static_cast<int>(f)]; }
  Real& at(Field f, int k, int n) { return (*this)[f][layout.offset(k, n)]; }
  Real at(Field f, int k, int n) const { return (*this)[f][layout.offset(k, n)]; }

  void set_zero() {
    for (auto& d : data) std::fill(d.begin(), d.end(), Real(0));
  }
};

/// Unpadded per-element field values, indexed k*Np + n. Always double.
struct NodalFields {
  int K = 0;
  int Np = 0;
  std::array<std::vector<double>, 3> data;

  NodalFields() = default;
  NodalFields(int K_, int Np_) : K(K_), Np(Np_) {
    for (auto& d : data) d.assign(static_cast<std::size_t>(K) * Np, 0.0);
  }
  std::vector<double>& operator[](Field f) { return data[static_cast<int>(f)]; }
  const std::vector<double>& operator[](Field f) const { return data[static_cast<int>(f)]; }
};

template <class Real>
void scatter(const NodalFields& in, FieldSet<Real>& out) {
  if (in.K != out.layout.K || in.Np != out.layout.Np) {
    throw LayoutError("scatter: nodal fields do not match the layout");
  }
  for (int f = 0; f < 3; ++f) {
    for (int k = 0; k < in.K; ++k) {
      for (int n = 0; n < in.Np; ++n) {
        out.data[f][out.layout.offset(k, n)] =
            static_cast<Real>(in.data[f][static_cast<std::size_t>(k) * in.Np + n]);
      }
    }
  }
}

template <class Real>
NodalFields gather(const FieldSet<Real>& in) {
  NodalFields out(in.layout.K, in.layout.Np);
  for (int f = 0; f < 3; ++f) {
    for (int k = 0; k < out.K; ++k) {
      for (int n = 0; n < out.Np; ++n) {
        out.data[f][static_cast<std::size_t>(k) * out.Np + n] =
            static_cast<double>(in.data[f][in.layout.offset(k, n)]);
      }
    }
  }
  return out;
}

/// True when every slot outside the K*Np real DOFs holds exactly zero.
template <class Real>
bool padding_is_zero(const FieldSet<Real>& q) {
  const LayoutSpec& L = q.layout;
  std::vector<char> live(L.storage_size(), 0);
  for (int k = 0; k < L.K; ++k) {
    for (int n = 0; n < L.Np; ++n) live[L.offset(k, n)] = 1;
  }
  for (const auto& d : q.data) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!live[i] && d[i] != Real(0)) return false;
    }
  }
  return true;
}

}  // namespace dgtm
