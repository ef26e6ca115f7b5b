#pragma once
// Versioned binary state snapshots.  Layout (all little-endian):
//
//   bytes 0..7   magic "ZKSNAP01" (version is part of the magic)
//   u32 x 5      d, nx, nt1, nt2, bc (0 = dirichlet, 1 = periodic)
//   u64          creation time (unix seconds; informational)
//   f64          simulation time of the state
//   u64          coefficient count = (nx/2 + 1) * nt1 * (d == 2 ? nt2 : 1)
//   f64 pairs    (re, im) per coefficient, x-frequency index fastest
//
// Readers reject wrong magic/version, truncated payloads, and trailing bytes.
// A snapshot written on a different grid loads only when resampling is
// explicitly requested and the basis family matches.

#include <bit>
#include <cstdint>
#include <cstring>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zk/transforms.hpp"

namespace zk {

namespace detail {

inline constexpr char snapshot_magic[8] = {'Z', 'K', 'S', 'N', 'A', 'P', '0', '1'};

inline void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<uint64_t>(v));
}

class ByteReader {
 public:
  ByteReader(const char* data, size_t size) : p_(data), end_(data + size) {}
  [[nodiscard]] uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<unsigned char>(p_[i])) << (8 * i);
    p_ += 8;
    return v;
  }
  [[nodiscard]] uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<unsigned char>(p_[i])) << (8 * i);
    p_ += 4;
    return v;
  }
  [[nodiscard]] double f64() { return std::bit_cast<double>(u64()); }
  [[nodiscard]] size_t remaining() const { return static_cast<size_t>(end_ - p_); }

 private:
  void need(size_t n) const {
    if (remaining() < n)
      throw std::runtime_error("snapshot: truncated payload");
  }
  const char* p_;
  const char* end_;
};

}  // namespace detail

struct SnapshotInfo {
  DomainSpec domain;
  double time = 0.0;
  uint64_t created_at = 0;
};

inline void write_snapshot(const std::string& path, const Domain& dom,
                           const SpectralField& u, double time) {
  require_shape(dom, u);
  if (!in_standard_basis(dom, u))
    throw std::invalid_argument("snapshot: field not in the standard basis");
  std::string out;
  out.reserve(48 + u.c.size() * 16);
  out.append(detail::snapshot_magic, 8);
  detail::put_u32(out, static_cast<uint32_t>(dom.d()));
  detail::put_u32(out, static_cast<uint32_t>(dom.nx()));
  detail::put_u32(out, static_cast<uint32_t>(dom.n1()));
  detail::put_u32(out, static_cast<uint32_t>(dom.d() == 2 ? dom.n2() : 0));
  detail::put_u32(out, dom.bc() == TransverseBc::dirichlet ? 0u : 1u);
  detail::put_u64(out, static_cast<uint64_t>(std::time(nullptr)));
  detail::put_f64(out, time);
  detail::put_u64(out, static_cast<uint64_t>(u.c.size()));
  for (const cplx& z : u.c) {
    detail::put_f64(out, z.real());
    detail::put_f64(out, z.imag());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("snapshot: cannot open '" + path + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("snapshot: write failed for '" + path + "'");
}

namespace detail {

struct RawSnapshot {
  SnapshotInfo info;
  std::vector<cplx> coeffs;
};

[[nodiscard]] inline RawSnapshot read_raw_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("snapshot: cannot open '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 8 || std::memcmp(data.data(), snapshot_magic, 6) != 0)
    throw std::runtime_error("snapshot: bad magic");
  if (std::memcmp(data.data(), snapshot_magic, 8) != 0)
    throw std::runtime_error("snapshot: unsupported version");
  ByteReader r(data.data() + 8, data.size() - 8);
  RawSnapshot snap;
  snap.info.domain.d = static_cast<int>(r.u32());
  snap.info.domain.nx = static_cast<int>(r.u32());
  snap.info.domain.nt1 = static_cast<int>(r.u32());
  snap.info.domain.nt2 = static_cast<int>(r.u32());
  const uint32_t bc = r.u32();
  if (bc > 1) throw std::runtime_error("snapshot: invalid boundary tag");
  snap.info.domain.bc = bc == 0 ? TransverseBc::dirichlet : TransverseBc::periodic;
  snap.info.created_at = r.u64();
  snap.info.time = r.f64();
  const uint64_t count = r.u64();
  const uint64_t expect =
      static_cast<uint64_t>(snap.info.domain.nx / 2 + 1) *
      static_cast<uint64_t>(snap.info.domain.nt1) *
      static_cast<uint64_t>(snap.info.domain.d == 2 ? snap.info.domain.nt2 : 1);
  if (count != expect)
    throw std::runtime_error("snapshot: coefficient count mismatch");
  if (r.remaining() != count * 16)
    throw std::runtime_error(r.remaining() < count * 16
                                 ? "snapshot: truncated payload"
                                 : "snapshot: trailing bytes");
  snap.coeffs.resize(count);
  for (cplx& z : snap.coeffs) {
    const double re = r.f64();
    const double im = r.f64();
    z = cplx(re, im);
  }
  return snap;
}

}  // namespace detail

[[nodiscard]] inline SnapshotInfo peek_snapshot(const std::string& path) {
  return detail::read_raw_snapshot(path).info;
}

// Loads a snapshot onto `dom`.  A grid mismatch is an error unless
// `allow_resample` is set and both states share d and bc, in which case the
// stored field is transferred by exact spectral resampling.
[[nodiscard]] inline SpectralField read_snapshot(const Domain& dom,
                                                 const std::string& path,
                                                 double* time = nullptr,
                                                 bool allow_resample = false) {
  detail::RawSnapshot snap = detail::read_raw_snapshot(path);
  if (time) *time = snap.info.time;
  DomainSpec spec = snap.info.domain;
  if (spec.d == 1) spec.nt2 = 0;
  const DomainSpec here{dom.d(), dom.nx(), dom.n1(),
                        dom.d() == 2 ? dom.n2() : 0, dom.bc()};
  if (spec == here) {
    SpectralField u = make_spectral(dom);
    u.c = std::move(snap.coeffs);
    enforce_real_symmetry(dom, u);
    return u;
  }
  if (!allow_resample)
    throw std::runtime_error("snapshot: domain mismatch (resampling not requested)");
  if (spec.d != here.d || spec.bc != here.bc)
    throw std::runtime_error("snapshot: incompatible basis family");
  const Domain src = build_domain(spec);
  SpectralField u = make_spectral(src);
  u.c = std::move(snap.coeffs);
  enforce_real_symmetry(src, u);
  return resample(src, dom, u);
}

}  // namespace zk
