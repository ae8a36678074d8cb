#pragma once

// Transform matrices of the linear methods and their cache.
//
// BM:  h = A m,              A_ij = C(n,j) C(j,i) (-1)^(j-i) [j >= i]
// FL:  c = Ahat (1 - mhat),  Ahat_kl = (-1)^(k-l) (2k+1)/(l+1)
//                                      sum_j C(k,j) C(k,k-j) C(k-j,k-l) [l <= k]
// FC:  as FL with C(k-1/2, .) binomials and the Chebyshev norm factor.
//
// BM and FL entries are exact rationals; FC entries are computed at the
// working precision. The cache keeps one XReal copy per (method, n, digits)
// in memory and, when a directory is configured, one text file per matrix.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/numerics/special.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

enum class MatrixKind { BM, FL, FC };

inline std::string matrix_kind_name(MatrixKind k) {
  switch (k) {
    case MatrixKind::BM:
      return "bm";
    case MatrixKind::FL:
      return "fl";
    case MatrixKind::FC:
      return "fc";
  }
  return "?";
}

inline MatrixKind parse_matrix_kind(const std::string& s) {
  if (s == "bm") return MatrixKind::BM;
  if (s == "fl") return MatrixKind::FL;
  if (s == "fc") return MatrixKind::FC;
  throw SchemaMismatch("unknown matrix kind: " + s);
}

struct TransformMatrix {
  MatrixKind method = MatrixKind::BM;
  int n = 0;
  int digits = 0;                // 0 for exact matrices
  std::vector<Rational> exact;   // row-major, BM and FL only
  std::vector<XReal> values;     // row-major, at the precision it was loaded for

  [[nodiscard]] int size() const { return n + 1; }
  [[nodiscard]] const XReal& operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * size() + j]; }

  /// y = M x at the working precision, skipping structural zeros.
  [[nodiscard]] std::vector<XReal> apply(const std::vector<XReal>& x) const {
    const int s = size();
    std::vector<XReal> y(s);
    for (int i = 0; i < s; ++i) {
      XReal acc(0);
      const int lo = method == MatrixKind::BM ? i : 0;
      const int hi = method == MatrixKind::BM ? s - 1 : i;
      for (int j = lo; j <= hi; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }
};

/// Exact BM matrix entries.
inline std::vector<Rational> bm_matrix_exact(int n) {
  if (n < 1) throw DomainError("bm_matrix: n must be >= 1");
  const int s = n + 1;
  std::vector<Rational> a(static_cast<std::size_t>(s) * s, Rational(0));
  for (int j = 0; j <= n; ++j) {
    const BigInt cnj = binomial_exact(n, j);
    for (int i = 0; i <= j; ++i) {
      BigInt v = cnj * binomial_exact(j, i);
      if ((j - i) % 2) v = -v;
      a[static_cast<std::size_t>(i) * s + j] = Rational(v);
    }
  }
  return a;
}

/// Exact FL matrix entries.
inline std::vector<Rational> fl_matrix_exact(int n) {
  if (n < 0) throw DomainError("fl_matrix: n must be >= 0");
  const int s = n + 1;
  std::vector<Rational> a(static_cast<std::size_t>(s) * s, Rational(0));
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= k; ++l) {
      BigInt sum = 0;
      for (int j = 0; j <= l; ++j) sum += binomial_exact(k, j) * binomial_exact(k, k - j) * binomial_exact(k - j, k - l);
      Rational v(sum * (2 * k + 1), BigInt(l + 1));
      if ((k - l) % 2) v = -v;
      a[static_cast<std::size_t>(k) * s + l] = v;
    }
  }
  return a;
}

/// c'_0 = 1/pi, c'_m = 2 (Gamma(m+1) / Gamma(m+1/2))^2.
inline XReal fc_norm_factor(int m) {
  if (m == 0) return XReal(1) / const_pi();
  const XReal r = exp(lgamma(XReal(m + 1)) - lgamma(XReal(m) + XReal(0.5)));
  return XReal(2) * r * r;
}

/// FC matrix entries at the working precision (computed with guard digits).
inline std::vector<XReal> fc_matrix_values(int n) {
  if (n < 0) throw DomainError("fc_matrix: n must be >= 0");
  const int p = working_digits();
  const int s = n + 1;
  std::vector<XReal> a(static_cast<std::size_t>(s) * s, XReal(0));
  std::vector<XReal> raw(a.size());
  {
    ScopedDigits guard(p + 10);
    const XReal half(0.5);
    for (int k = 0; k <= n; ++k) {
      const XReal ck = fc_norm_factor(k);
      const XReal r = XReal(k) - half;
      for (int l = 0; l <= k; ++l) {
        XReal sum(0);
        for (int j = 0; j <= l; ++j) {
          sum += binomial_general(r, j) * binomial_general(r, k - j) * XReal(binomial_exact(k - j, k - l));
        }
        XReal v = ck * sum / XReal(l + 1);
        if ((k - l) % 2) v = -v;
        raw[static_cast<std::size_t>(k) * s + l] = v;
      }
    }
  }
  for (std::size_t i = 0; i < raw.size(); ++i) a[i] = rounded(raw[i]);
  return a;
}

namespace detail {

inline std::string matrix_header(MatrixKind kind, int n, int digits) {
  return "HMT-MATRIX v1 method=" + matrix_kind_name(kind) + " n=" + std::to_string(n) +
         " digits=" + std::to_string(digits);
}

}  // namespace detail

/// Writes a matrix in the cache text format.
inline void write_matrix_file(const std::filesystem::path& path, const TransformMatrix& m) {
  std::ostringstream os;
  os << detail::matrix_header(m.method, m.n, m.digits) << '\n';
  const std::size_t count = static_cast<std::size_t>(m.size()) * m.size();
  for (std::size_t i = 0; i < count; ++i) {
    if (!m.exact.empty()) {
      os << m.exact[i].str() << '\n';
    } else {
      os << m.values[i].to_string(m.digits + 3) << '\n';
    }
  }
  const auto tmp = path.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write matrix cache file " + tmp);
    out << os.str();
  }
  std::filesystem::rename(tmp, path);
}

/// Reads a cache file; entries are converted at the working precision.
inline TransformMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open matrix cache file " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, version, method, n_field, digits_field;
  hs >> magic >> version >> method >> n_field >> digits_field;
  if (magic != "HMT-MATRIX" || version != "v1" || method.rfind("method=", 0) != 0 || n_field.rfind("n=", 0) != 0 ||
      digits_field.rfind("digits=", 0) != 0) {
    throw SchemaMismatch("bad matrix cache header: " + header);
  }
  TransformMatrix m;
  m.method = parse_matrix_kind(method.substr(7));
  m.n = std::stoi(n_field.substr(2));
  m.digits = std::stoi(digits_field.substr(7));
  const std::size_t count = static_cast<std::size_t>(m.size()) * m.size();
  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw SchemaMismatch("truncated matrix cache file " + path.string());
    if (m.digits == 0) {
      m.exact.emplace_back(line);
    } else {
      m.values.push_back(XReal::parse(line));
    }
  }
  if (m.digits == 0) {
    for (const auto& q : m.exact) m.values.emplace_back(q);
  }
  return m;
}

/// Concurrent-read, exclusive-write matrix store. The first matrix inserted
/// under a key wins; later builders reuse it.
class MatrixCache {
 public:
  MatrixCache() = default;
  explicit MatrixCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void set_directory(std::filesystem::path dir) {
    std::unique_lock lock(mutex_);
    dir_ = std::move(dir);
  }
  [[nodiscard]] std::filesystem::path directory() const {
    std::shared_lock lock(mutex_);
    return dir_;
  }
  void clear_memory() {
    std::unique_lock lock(mutex_);
    entries_.clear();
  }

  /// The matrix with XReal entries at the working precision.
  std::shared_ptr<const TransformMatrix> get(MatrixKind kind, int n) {
    const int p = working_digits();
    const Key key{static_cast<int>(kind), n, p};
    {
      std::shared_lock lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto built = std::make_shared<const TransformMatrix>(load_or_build(kind, n, p));
    std::unique_lock lock(mutex_);
    return entries_.try_emplace(key, std::move(built)).first->second;
  }

  /// File name used for a matrix under the cache directory.
  static std::string file_name(MatrixKind kind, int n, int digits) {
    return matrix_kind_name(kind) + "_n" + std::to_string(n) + "_d" + std::to_string(digits) + ".txt";
  }

 private:
  using Key = std::tuple<int, int, int>;

  TransformMatrix load_or_build(MatrixKind kind, int n, int p) {
    const int file_digits = kind == MatrixKind::FC ? p : 0;
    const auto dir = directory();
    std::filesystem::path path;
    if (!dir.empty()) {
      path = dir / file_name(kind, n, file_digits);
      if (std::filesystem::exists(path)) {
        auto m = read_matrix_file(path);
        if (m.method == kind && m.n == n && m.digits == file_digits) return m;
      }
    }
    TransformMatrix m;
    m.method = kind;
    m.n = n;
    m.digits = file_digits;
    if (kind == MatrixKind::FC) {
      m.values = fc_matrix_values(n);
    } else {
      m.exact = kind == MatrixKind::BM ? bm_matrix_exact(n) : fl_matrix_exact(n);
      m.values.reserve(m.exact.size());
      for (const auto& q : m.exact) m.values.emplace_back(q);
    }
    if (!path.empty()) {
      std::filesystem::create_directories(dir);
      write_matrix_file(path, m);
    }
    return m;
  }

  mutable std::shared_mutex mutex_;
  std::filesystem::path dir_;
  std::map<Key, std::shared_ptr<const TransformMatrix>> entries_;
};

inline MatrixCache& default_matrix_cache() {
  static MatrixCache cache;
  return cache;
}

inline std::shared_ptr<const TransformMatrix> bm_matrix(int n) { return default_matrix_cache().get(MatrixKind::BM, n); }
inline std::shared_ptr<const TransformMatrix> fl_matrix(int n) { return default_matrix_cache().get(MatrixKind::FL, n); }
inline std::shared_ptr<const TransformMatrix> fc_matrix(int n) { return default_matrix_cache().get(MatrixKind::FC, n); }

}  // namespace hmt
