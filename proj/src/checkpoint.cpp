#include "kfvp/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace kfvp {

namespace {

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  const std::vector<char>& bytes() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(std::vector<char> buf, std::string path) : buf_(std::move(buf)), path_(std::move(path)) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void expect(const char* tag, std::size_t n) {
    need(n);
    if (std::memcmp(buf_.data() + pos_, tag, n) != 0) throw IoError(path_ + ": not a checkpoint (bad magic)");
    pos_ += n;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw IoError(path_ + ": checkpoint truncated");
  }
  std::vector<char> buf_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  const SimState& s = cp.state;
  const Eigen::Index p = cp.grid.points();
  const Eigen::Index m = cp.basis.num_modes();
  if (s.f.rows() != p || s.f.cols() != m || s.rho.size() != p || s.u.rows() != p || s.u.cols() != cp.grid.dim)
    throw ShapeError("checkpoint: state does not match grid/basis");
  Writer w;
  w.raw("KFVP", 4);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(cp.grid.dim));
  w.u32(static_cast<std::uint32_t>(cp.basis.dim));
  w.u32(static_cast<std::uint32_t>(cp.grid.n));
  w.u32(static_cast<std::uint32_t>(cp.basis.order));
  w.u32(static_cast<std::uint32_t>(cp.basis.quad_size));
  w.f64(cp.grid.box);
  w.f64(cp.gamma);
  w.f64(cp.c0);
  w.f64(s.t);
  w.u64(s.step);
  for (Eigen::Index i = 0; i < p; ++i) w.f64(s.rho(i));
  for (Eigen::Index a = 0; a < s.u.cols(); ++a)
    for (Eigen::Index i = 0; i < p; ++i) w.f64(s.u(i, a));
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < m; ++j) w.f64(s.f(i, j));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(buf), path);
  r.expect("KFVP", 4);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) throw IoError(path + ": unsupported checkpoint version " + std::to_string(version));
  Checkpoint cp;
  cp.grid.dim = static_cast<int>(r.u32());
  cp.basis.dim = static_cast<int>(r.u32());
  cp.grid.n = static_cast<int>(r.u32());
  cp.basis.order = static_cast<int>(r.u32());
  cp.basis.quad_size = static_cast<int>(r.u32());
  cp.grid.box = r.f64();
  cp.gamma = r.f64();
  cp.c0 = r.f64();
  try {
    cp.grid.validate();
    cp.basis.validate();
  } catch (const ConfigError& e) {
    throw IoError(path + ": corrupt checkpoint header: " + e.what());
  }
  SimState& s = cp.state;
  s.t = r.f64();
  s.step = r.u64();
  const Eigen::Index p = cp.grid.points();
  const Eigen::Index m = cp.basis.num_modes();
  s.rho.resize(p);
  s.u.resize(p, cp.grid.dim);
  s.f.resize(p, m);
  for (Eigen::Index i = 0; i < p; ++i) s.rho(i) = r.f64();
  for (Eigen::Index a = 0; a < s.u.cols(); ++a)
    for (Eigen::Index i = 0; i < p; ++i) s.u(i, a) = r.f64();
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < m; ++j) s.f(i, j) = r.f64();
  if (!r.done()) throw IoError(path + ": trailing bytes after checkpoint payload");
  return cp;
}

}  // namespace kfvp
