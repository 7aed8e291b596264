#include "isorad/curves.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>

namespace isorad {

namespace {

i128 mul_checked(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("discriminant overflow");
  return r;
}

i128 add_checked(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("discriminant overflow");
  return r;
}

i128 curve_discriminant(i64 a2, i64 a4, i64 a6) {
  const i128 b = a2, c = a4, d = a6;
  // disc(x^3 + b x^2 + c x + d) = b^2c^2 - 4c^3 - 4b^3d - 27d^2 + 18bcd
  i128 s = mul_checked(mul_checked(b, b), mul_checked(c, c));
  s = add_checked(s, -mul_checked(4, mul_checked(c, mul_checked(c, c))));
  s = add_checked(s, -mul_checked(4, mul_checked(mul_checked(b, mul_checked(b, b)), d)));
  s = add_checked(s, -mul_checked(27, mul_checked(d, d)));
  s = add_checked(s, mul_checked(18, mul_checked(b, mul_checked(c, d))));
  return mul_checked(16, s);
}

void check_coefficient(i64 a) {
  if (a > kMaxCoefficient || a < -kMaxCoefficient) throw OverflowError("curve coefficient out of range");
}

i64 mul_i64(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("coefficient overflow");
  return r;
}

}  // namespace

CurveOverQ::CurveOverQ(std::string label, i64 a2, i64 a4, i64 a6)
    : label_(std::move(label)), a2_(a2), a4_(a4), a6_(a6) {
  check_coefficient(a2);
  check_coefficient(a4);
  check_coefficient(a6);
  disc_ = curve_discriminant(a2, a4, a6);
  if (disc_ == 0) throw SingularCurve("singular curve " + label_);
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

u64 ReducedCurve::rhs(u64 x) const {
  const u64 q = p.value();
  u64 r = add_mod(x, a2, q);
  r = add_mod(mul_mod(r, x, q), a4, q);
  return add_mod(mul_mod(r, x, q), a6, q);
}

std::optional<ReducedCurve> reduce(const CurveOverQ& curve, PrimeModulus p) {
  if (p.value() < 5) throw Error("places of characteristic 2 and 3 are excluded");
  if (reduce_signed(curve.discriminant(), p.value()) == 0) return std::nullopt;
  const u64 q = p.value();
  return ReducedCurve{curve.label(), p, reduce_signed(curve.a2(), q), reduce_signed(curve.a4(), q),
                      reduce_signed(curve.a6(), q)};
}

ReducedCurve reduce_or_throw(const CurveOverQ& curve, PrimeModulus p) {
  auto r = reduce(curve, p);
  if (!r) throw BadReduction(curve.label() + " has bad reduction at " + std::to_string(p.value()));
  return *r;
}

namespace {

/// chi[v] in {0, 1, 2} for (v/p) in {0, +1, -1}.
std::vector<std::uint8_t> residue_table(u64 p) {
  std::vector<std::uint8_t> chi(p, 2);
  chi[0] = 0;
  u64 sq = 0;
  // (y+1)^2 = y^2 + 2y + 1
  for (u64 y = 1; y <= p / 2; ++y) {
    sq = add_mod(sq, add_mod(2 * (y - 1) % p, 1, p), p);
    chi[sq] = 1;
  }
  return chi;
}

CountRecord make_record(const ReducedCurve& c, u64 n) {
  const u64 p = c.p.value();
  return CountRecord{c.label, p, n, static_cast<i64>(p + 1) - static_cast<i64>(n)};
}

}  // namespace

CountRecord count_points(const ReducedCurve& curve, u64 cap) {
  const u64 p = curve.p.value();
  if (p > cap) throw CapExceeded("p = " + std::to_string(p) + " exceeds the counting cap");
  const auto chi = residue_table(p);
  i64 sum = 0;
  for (u64 x = 0; x < p; ++x) {
    const std::uint8_t c = chi[curve.rhs(x)];
    sum += c == 1 ? 1 : (c == 2 ? -1 : 0);
  }
  return make_record(curve, static_cast<u64>(static_cast<i64>(p + 1) + sum));
}

CountRecord count_points_naive(const ReducedCurve& curve) {
  const u64 p = curve.p.value();
  u64 n = 1;
  for (u64 x = 0; x < p; ++x) {
    const u64 f = curve.rhs(x);
    for (u64 y = 0; y < p; ++y) n += (mul_mod(y, y, p) == f);
  }
  return make_record(curve, n);
}

namespace {

struct AffinePoint {
  u64 x = 0, y = 0;
  bool infinity = true;
};

AffinePoint add_points(const ReducedCurve& c, const AffinePoint& a, const AffinePoint& b) {
  const u64 p = c.p.value();
  if (a.infinity) return b;
  if (b.infinity) return a;
  u64 slope;
  if (a.x == b.x) {
    if (add_mod(a.y, b.y, p) == 0) return {};
    // (3x^2 + 2 a2 x + a4) / 2y
    u64 num = add_mod(add_mod(mul_mod(3, mul_mod(a.x, a.x, p), p), mul_mod(2 * c.a2 % p, a.x, p), p), c.a4, p);
    slope = mul_mod(num, inv_mod(mul_mod(2, a.y, p), p), p);
  } else {
    slope = mul_mod(sub_mod(b.y, a.y, p), inv_mod(sub_mod(b.x, a.x, p), p), p);
  }
  const u64 x3 = sub_mod(sub_mod(sub_mod(mul_mod(slope, slope, p), c.a2, p), a.x, p), b.x, p);
  const u64 y3 = sub_mod(mul_mod(slope, sub_mod(a.x, x3, p), p), a.y, p);
  return {x3, y3, false};
}

AffinePoint scalar_mul(const ReducedCurve& c, AffinePoint pt, u64 k) {
  AffinePoint acc;
  while (k) {
    if (k & 1) acc = add_points(c, acc, pt);
    pt = add_points(c, pt, pt);
    k >>= 1;
  }
  return acc;
}

}  // namespace

TorsionProfile ell_torsion_rank(const ReducedCurve& curve, PrimeModulus ell) {
  const u64 p = curve.p.value();
  const u64 l = ell.value();
  if (l == p) throw Error("l must differ from p");
  if (l == 2) throw Error("l must be odd");
  const CountRecord rec = count_points(curve);
  if (rec.count % l != 0) return {p, l, 0, 1};

  std::vector<u64> root(p, 0);
  std::vector<std::uint8_t> square(p, 0);
  for (u64 y = 0; y <= p / 2; ++y) {
    const u64 s = mul_mod(y, y, p);
    root[s] = y;
    square[s] = 1;
  }
  u64 killed = 1;  // the point at infinity
  for (u64 x = 0; x < p; ++x) {
    const u64 f = curve.rhs(x);
    if (!square[f]) continue;
    const u64 y = root[f];
    const bool hit = scalar_mul(curve, AffinePoint{x, y, false}, l).infinity;
    if (hit) killed += (y == 0) ? 1 : 2;  // -P is killed iff P is
  }
  unsigned rank = 0;
  u64 size = 1;
  while (size < killed) {
    size *= l;
    ++rank;
  }
  if (size != killed || rank > 2) throw Error("l-torsion subgroup has impossible size");
  return {p, l, rank, killed};
}

bool is_squarefree(i64 d) {
  if (d == 0) return false;
  u64 n = d < 0 ? static_cast<u64>(-(d + 1)) + 1 : static_cast<u64>(d);
  for (u64 q = 2; q * q <= n; ++q) {
    if (n % (q * q) == 0) return false;
    while (n % q == 0) n /= q;
  }
  return true;
}

CurveOverQ quadratic_twist(const CurveOverQ& curve, i64 d, std::string label) {
  if (!is_squarefree(d)) throw Error("twist parameter must be squarefree and nonzero");
  if (label.empty()) label = curve.label() + "^(" + std::to_string(d) + ")";
  const i64 d2 = mul_i64(d, d);
  return CurveOverQ(std::move(label), mul_i64(d, curve.a2()), mul_i64(d2, curve.a4()),
                    mul_i64(mul_i64(d2, d), curve.a6()));
}

CurveOverQ velu_two_isogenous(const CurveOverQ& curve, std::string label) {
  if (curve.a6() != 0) throw Error("2-isogeny needs (0, 0) on the curve (a6 = 0)");
  const i64 a = curve.a2();
  const i64 b = curve.a4();
  if (label.empty()) label = curve.label() + "/2";
  const i64 b_new = mul_i64(a, a) - mul_i64(4, b);
  if (b_new == 0) throw SingularCurve("2-isogenous model is singular");
  return CurveOverQ(std::move(label), -2 * a, b_new, 0);
}

FieldElement FrobeniusCharpoly::reversed_at_one() const {
  const FieldElement one(1, linear.modulus());
  return one + linear + constant;
}

FrobeniusCharpoly charpoly_mod_ell(const CountRecord& rec, PrimeModulus ell) {
  if (rec.p == ell.value()) throw Error("l must differ from p");
  return {FieldElement::from_signed(-rec.trace, ell), FieldElement(rec.p, ell)};
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_i64(const std::string& tok, i64& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (errno != 0 || *end != '\0') return false;
  out = v;
  return true;
}

}  // namespace

std::vector<CurveOverQ> parse_curve_file(std::istream& in) {
  std::vector<CurveOverQ> curves;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(lineno) + ": ";
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(where + "expected 'label : a2 a4 a6'");
    const std::string label = trim(line.substr(0, colon));
    if (label.empty() || std::any_of(label.begin(), label.end(), [](unsigned char ch) { return std::isspace(ch); }))
      throw ParseError(where + "bad label");
    std::istringstream fields(line.substr(colon + 1));
    std::vector<i64> coef;
    std::string tok;
    while (fields >> tok) {
      i64 v;
      if (!parse_i64(tok, v)) throw ParseError(where + "bad integer '" + tok + "'");
      coef.push_back(v);
    }
    if (coef.size() != 3) throw ParseError(where + "expected three coefficients");
    for (const auto& c : curves)
      if (c.label() == label) throw ParseError(where + "duplicate label " + label);
    try {
      curves.emplace_back(label, coef[0], coef[1], coef[2]);
    } catch (const OverflowError& e) {
      throw ParseError(where + e.what());
    }
  }
  return curves;
}

std::vector<CurveOverQ> read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open curve file " + path);
  return parse_curve_file(in);
}

std::string CountCache::checksum(const CurveOverQ& curve) {
  const std::string key = curve.label() + " " + std::to_string(curve.a2()) + " " + std::to_string(curve.a4()) +
                          " " + std::to_string(curve.a6());
  u64 h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : key) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

CountCache CountCache::load(const std::string& path) {
  CountCache cache;
  std::ifstream in(path);
  if (!in) return cache;
  cache.exists_ = true;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = path + ":" + std::to_string(lineno) + ": ";
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first[0] == '#') {
      std::string kind;
      if (!(fields >> kind) || kind != "curve") continue;
      std::string label, sum;
      i64 a2, a4, a6;
      if (!(fields >> label >> a2 >> a4 >> a6 >> sum)) throw ParseError(where + "malformed curve line");
      if (checksum(CurveOverQ(label, a2, a4, a6)) != sum) throw ParseError(where + "checksum mismatch");
      cache.models_[label] = Model{a2, a4, a6};
      continue;
    }
    u64 p, n;
    std::string rest;
    if (!(fields >> p >> n) || (fields >> rest)) throw ParseError(where + "expected 'label p N'");
    cache.records_[first][p] = n;
  }
  return cache;
}

void CountCache::check_curve(const CurveOverQ& curve) const {
  auto it = models_.find(curve.label());
  if (it == models_.end()) {
    if (records_.count(curve.label())) throw CacheConflict("cache has counts for " + curve.label() + " without a model line");
    return;
  }
  const Model& m = it->second;
  if (m.a2 != curve.a2() || m.a4 != curve.a4() || m.a6 != curve.a6())
    throw CacheConflict("cache binds label " + curve.label() + " to a different curve");
}

bool CountCache::has(const std::string& label, u64 p) const { return get(label, p).has_value(); }

std::optional<u64> CountCache::get(const std::string& label, u64 p) const {
  auto it = records_.find(label);
  if (it == records_.end()) return std::nullopt;
  auto jt = it->second.find(p);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

std::size_t CountCache::size() const {
  std::size_t n = 0;
  for (const auto& [label, by_p] : records_) n += by_p.size();
  return n;
}

void CountCache::append(const std::string& path, const std::vector<CurveOverQ>& curves,
                        const std::vector<CountRecord>& fresh) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot write cache " + path);
  if (!exists_) {
    out << kHeader << '\n';
    exists_ = true;
  }
  for (const auto& c : curves) {
    check_curve(c);
    if (models_.count(c.label())) continue;
    out << "# curve " << c.label() << ' ' << c.a2() << ' ' << c.a4() << ' ' << c.a6() << ' ' << checksum(c) << '\n';
    models_[c.label()] = Model{c.a2(), c.a4(), c.a6()};
  }
  for (const auto& r : fresh) {
    if (has(r.label, r.p)) continue;
    out << r.label << ' ' << r.p << ' ' << r.count << '\n';
    records_[r.label][r.p] = r.count;
  }
  if (!out) throw Error("failed writing cache " + path);
}

}  // namespace isorad
