#include "dnsnmf/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace dnsnmf {

namespace {

constexpr char kMagic[8] = {'D', 'N', 'S', 'N', 'M', 'F', '0', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(std::string& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_name(std::string& out, const std::string& name) {
  const auto len = static_cast<std::uint16_t>(name.size());
  out.push_back(static_cast<char>(len & 0xff));
  out.push_back(static_cast<char>((len >> 8) & 0xff));
  out.append(name);
}

void put_matrix(std::string& out, const std::string& name, const DenseMatrix& m) {
  put_name(out, name);
  put_i64(out, m.rows());
  put_i64(out, m.cols());
  for (double v : m.values()) put_f64(out, v);
}

class Reader {
 public:
  Reader(std::string data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::int64_t count(std::int64_t max, const char* what) {
    const std::int64_t v = i64();
    if (v < 0 || v > max) {
      throw DataFormatError(path_ + ": implausible " + what + " " + std::to_string(v));
    }
    return v;
  }

  std::string name() {
    require(2);
    const std::size_t len = static_cast<unsigned char>(data_[pos_]) |
                            (static_cast<std::size_t>(static_cast<unsigned char>(data_[pos_ + 1]))
                             << 8);
    pos_ += 2;
    require(len);
    std::string s = data_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  void expect_magic() {
    require(8);
    if (std::memcmp(data_.data(), kMagic, 8) != 0) {
      throw DataFormatError(path_ + ": not a factorization checkpoint");
    }
    pos_ = 8;
  }

  void expect_end() const {
    if (pos_ != data_.size()) throw DataFormatError(path_ + ": trailing bytes");
  }

 private:
  void require(std::size_t bytes) const {
    if (pos_ + bytes > data_.size()) throw DataFormatError(path_ + ": truncated checkpoint");
  }

  std::string data_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  const index_t m = cp.stack.layers();
  if (m < 1) throw ParameterError("save_checkpoint: stack has no layers");
  validate_stack(cp.stack, cp.stack.z[0].rows(), cp.stack.h_top.cols(), "save_checkpoint");

  std::string out;
  out.append(kMagic, 8);
  put_u64(out, cp.seed);
  put_i64(out, m);
  for (index_t i = 0; i < m; ++i) put_i64(out, cp.stack.smoothing[static_cast<std::size_t>(i)].r);
  for (index_t i = 0; i < m; ++i) {
    put_f64(out, cp.stack.smoothing[static_cast<std::size_t>(i)].theta);
  }
  put_i64(out, m + 1);
  for (index_t i = 0; i < m; ++i) {
    put_matrix(out, "Z" + std::to_string(i + 1), cp.stack.z[static_cast<std::size_t>(i)]);
  }
  put_matrix(out, "H", cp.stack.h_top);
  put_i64(out, static_cast<std::int64_t>(cp.sweeps.size()));
  for (const SweepReport& s : cp.sweeps) {
    put_i64(out, s.sweep_index);
    put_f64(out, s.objective);
    put_i64(out, static_cast<std::int64_t>(s.per_block_inner_iters.size()));
    for (int it : s.per_block_inner_iters) put_i64(out, it);
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataFormatError(path + ": cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataFormatError(path + ": write failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataFormatError(path + ": cannot open");
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  Reader r(std::move(data), path);
  r.expect_magic();

  Checkpoint cp;
  cp.seed = r.u64();
  const std::int64_t m = r.count(1 << 16, "layer count");
  if (m < 1) throw DataFormatError(path + ": checkpoint has no layers");
  std::vector<index_t> dims(static_cast<std::size_t>(m));
  for (auto& d : dims) d = r.count(std::numeric_limits<std::int32_t>::max(), "dimension");
  cp.stack.smoothing.resize(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    cp.stack.smoothing[static_cast<std::size_t>(i)] =
        SmoothingSpec{r.f64(), dims[static_cast<std::size_t>(i)]};
  }

  const std::int64_t arrays = r.count(m + 1, "array count");
  if (arrays != m + 1) throw DataFormatError(path + ": expected " + std::to_string(m + 1) +
                                             " arrays");
  for (std::int64_t a = 0; a < arrays; ++a) {
    const std::string name = r.name();
    const std::int64_t rows = r.count(std::numeric_limits<std::int32_t>::max(), "rows");
    const std::int64_t cols = r.count(std::numeric_limits<std::int32_t>::max(), "cols");
    if (rows < 1 || cols < 1) throw DataFormatError(path + ": empty array " + name);
    std::vector<double> values(static_cast<std::size_t>(rows * cols));
    for (double& v : values) v = r.f64();
    DenseMatrix mat(rows, cols, std::move(values));
    const std::string expected = a < m ? "Z" + std::to_string(a + 1) : "H";
    if (name != expected) {
      throw DataFormatError(path + ": expected array " + expected + ", found " + name);
    }
    if (a < m) {
      cp.stack.z.push_back(std::move(mat));
    } else {
      cp.stack.h_top = std::move(mat);
    }
  }

  const std::int64_t sweeps = r.count(1 << 24, "sweep count");
  cp.sweeps.resize(static_cast<std::size_t>(sweeps));
  for (std::int64_t s = 0; s < sweeps; ++s) {
    SweepReport& rep = cp.sweeps[static_cast<std::size_t>(s)];
    rep.sweep_index = static_cast<int>(r.count(std::numeric_limits<std::int32_t>::max(), "sweep"));
    rep.objective = r.f64();
    const std::int64_t blocks = r.count(1 << 16, "block count");
    rep.per_block_inner_iters.resize(static_cast<std::size_t>(blocks));
    for (auto& it : rep.per_block_inner_iters) {
      it = static_cast<int>(r.count(std::numeric_limits<std::int32_t>::max(), "iteration count"));
    }
  }
  r.expect_end();

  try {
    validate_stack(cp.stack, cp.stack.z[0].rows(), cp.stack.h_top.cols(), "load_checkpoint");
  } catch (const Error& e) {
    throw DataFormatError(path + ": inconsistent checkpoint: " + e.what());
  }
  return cp;
}

}  // namespace dnsnmf
