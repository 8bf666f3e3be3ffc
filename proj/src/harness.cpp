#include "hessdamp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace hessdamp {

// ---------------------------------------------------------------------------
// Rates

RateReport rate_fit(const std::vector<double>& x, const std::vector<double>& value, RateMode mode, double lo,
                    double hi) {
  if (x.size() != value.size()) throw DimensionError("rate_fit: x and value differ in length");
  std::vector<double> X, Y, win;
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo || x[i] > hi) continue;
    if (!(value[i] > 0.0) || !std::isfinite(value[i])) {
      bad.push_back(i);
      continue;
    }
    if (mode == RateMode::poly && !(x[i] > 0.0)) {
      bad.push_back(i);
      continue;
    }
    X.push_back(mode == RateMode::poly ? std::log(x[i]) : x[i]);
    Y.push_back(std::log(value[i]));
    win.push_back(value[i]);
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "rate_fit: " << bad.size() << " nonpositive or non-finite values in the window, at indices";
    for (std::size_t j = 0; j < std::min<std::size_t>(bad.size(), 10); ++j) os << ' ' << bad[j];
    if (bad.size() > 10) os << " ...";
    throw ConfigError(os.str());
  }
  if (X.size() < 10) {
    std::ostringstream os;
    os << "rate_fit: window [" << lo << ", " << hi << "] holds " << X.size() << " points, need >= 10";
    throw ConfigError(os.str());
  }
  const double n = static_cast<double>(X.size());
  const double mx = std::accumulate(X.begin(), X.end(), 0.0) / n;
  const double my = std::accumulate(Y.begin(), Y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("rate_fit: window has no spread in x");
  RateReport r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double e = Y[i] - (r.intercept + r.slope * X[i]);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / n);
  r.window_lo = lo;
  r.window_hi = hi;
  r.points = static_cast<int>(X.size());
  r.oscillation_count = win.size() >= 3 ? oscillation_count(win) : 0;
  return r;
}

int oscillation_count(const std::vector<double>& s) {
  if (s.size() < 3) throw ConfigError("oscillation_count: need at least 3 values");
  int c = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    if (s[i] > s[i - 1] && s[i] > s[i + 1]) ++c;
  return c;
}

// ---------------------------------------------------------------------------
// CSV

std::vector<CsvRow> rows_from_trace(const Trace& trace) {
  std::vector<CsvRow> rows;
  rows.reserve(trace.iters.size());
  for (const auto& e : trace.iters) rows.push_back({e.k, static_cast<double>(e.k), e.f_gap, e.grad_norm, e.energy});
  return rows;
}

std::vector<CsvRow> rows_from_trajectory(const std::vector<TrajectorySample>& samples) {
  std::vector<CsvRow> rows;
  rows.reserve(samples.size());
  long i = 0;
  for (const auto& s : samples) rows.push_back({i++, s.t, s.f_gap, s.grad_norm, s.energy});
  return rows;
}

namespace {

void put_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

double parse_num(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    std::ostringstream os;
    os << "csv line " << line << ": bad number '" << field << "'";
    throw ConfigError(os.str());
  }
  return v;
}

constexpr const char* kCsvHeader = "index,t,f_gap,grad_norm,energy";

}  // namespace

std::string csv_string(const std::vector<CsvRow>& rows) {
  if (rows.empty()) throw ConfigError("emit_csv: empty trace");
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.index);
    out += ',';
    put_num(out, r.t);
    out += ',';
    put_num(out, r.f_gap);
    out += ',';
    put_num(out, r.grad_norm);
    out += ',';
    put_num(out, r.energy);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<CsvRow>& rows, const std::string& path) { write_text_file(path, csv_string(rows)); }

std::vector<CsvRow> parse_csv_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("csv: missing or wrong header");
  std::vector<CsvRow> rows;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 5) {
      std::ostringstream os;
      os << "csv line " << ln << ": expected 5 fields, got " << f.size();
      throw ConfigError(os.str());
    }
    CsvRow r;
    r.index = std::strtol(f[0].c_str(), nullptr, 10);
    r.t = parse_num(f[1], ln);
    r.f_gap = parse_num(f[2], ln);
    r.grad_norm = parse_num(f[3], ln);
    r.energy = parse_num(f[4], ln);
    rows.push_back(r);
  }
  return rows;
}

std::vector<CsvRow> parse_csv(const std::string& path) { return parse_csv_string(read_text_file(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string tick_label(double v, bool logscale) {
  char buf[32];
  if (logscale) {
    std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
  } else {
    std::snprintf(buf, sizeof buf, "%g", v);
  }
  return buf;
}

}  // namespace

std::string svg_string(const std::vector<PlotSeries>& series, const PlotOptions& opts) {
  if (series.empty()) throw ConfigError("emit_svg: no series");
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  const double W = 720, H = 440, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tx = [&](double v) { return opts.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return opts.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!opts.log_x || x > 0) && (!opts.log_y || y > 0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!std::isfinite(x0)) throw ConfigError("emit_svg: no plottable points");
  if (opts.log_x) x0 = std::floor(x0), x1 = std::ceil(x1);
  if (opts.log_y) y0 = std::floor(y0), y1 = std::ceil(y1);
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return mt + ph - (v - y0) / (y1 - y0) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" viewBox=\"0 0 720 440\">\n";
  o += "<rect width=\"720\" height=\"440\" fill=\"white\"/>\n";
  o += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
       xml_escape(opts.title) + "</text>\n";
  o += "<rect x=\"" + fmt2(ml) + "\" y=\"" + fmt2(mt) + "\" width=\"" + fmt2(pw) + "\" height=\"" + fmt2(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  // ticks: integer decades on log axes, 5 divisions on linear ones
  auto ticks = [](double a, double b, bool logscale) {
    std::vector<double> t;
    if (logscale) {
      const int step = std::max(1, static_cast<int>(std::ceil((b - a) / 10.0)));
      for (double v = a; v <= b + 1e-9; v += step) t.push_back(v);
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(a + (b - a) * i / 5.0);
    }
    return t;
  };
  for (double v : ticks(x0, x1, opts.log_x)) {
    const std::string X = fmt2(px(v));
    o += "<line x1=\"" + X + "\" y1=\"" + fmt2(mt + ph) + "\" x2=\"" + X + "\" y2=\"" + fmt2(mt + ph + 5) +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + X + "\" y=\"" + fmt2(mt + ph + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(v, opts.log_x) +
         "</text>\n";
  }
  for (double v : ticks(y0, y1, opts.log_y)) {
    const std::string Y = fmt2(py(v));
    o += "<line x1=\"" + fmt2(ml - 5) + "\" y1=\"" + Y + "\" x2=\"" + fmt2(ml) + "\" y2=\"" + Y +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt2(ml - 8) + "\" y=\"" + Y +
         "\" text-anchor=\"end\" dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         tick_label(v, opts.log_y) + "</text>\n";
  }
  o += "<text x=\"" + fmt2(ml + pw / 2) + "\" y=\"" + fmt2(H - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(opts.xlabel) +
       "</text>\n";
  o += "<text x=\"16\" y=\"" + fmt2(mt + ph / 2) + "\" transform=\"rotate(-90 16 " + fmt2(mt + ph / 2) +
       ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(opts.ylabel) +
       "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* col = colors[si % 6];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt2(px(tx(s.x[i]))) + "," + fmt2(py(ty(s.y[i])));
    }
    o += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.2\" points=\"" + pts +
         "\"/>\n";
    const double ly = mt + 16 + 16 * static_cast<double>(si);
    o += "<line x1=\"" + fmt2(ml + pw - 150) + "\" y1=\"" + fmt2(ly) + "\" x2=\"" + fmt2(ml + pw - 125) +
         "\" y2=\"" + fmt2(ly) + "\" stroke=\"" + col + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + fmt2(ml + pw - 120) + "\" y=\"" + fmt2(ly) +
         "\" dominant-baseline=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(s.label) +
         "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

void emit_svg(const std::vector<PlotSeries>& series, const PlotOptions& opts, const std::string& path) {
  write_text_file(path, svg_string(series, opts));
}

// ---------------------------------------------------------------------------
// RNG and instances

double Rng::uniform() {
  for (;;) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

namespace {

Mat gaussian_rows_normalized(int m, int n, Rng& rng) {
  Mat A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
  for (int i = 0; i < m; ++i) A.row(i) /= A.row(i).norm();
  return A;
}

// k distinct indices from [0, n) by partial Fisher-Yates
std::vector<int> choose(int n, int k, Rng& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.uniform() * (n - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(std::min(j, n - 1))]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

Vec noisy(const Mat& A, const Vec& x, Rng& rng) {
  Vec y = A * x;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += 0.01 * rng.normal();
  return y;
}

void check_dims(int m, int n, const char* who) {
  if (m <= 0 || n <= 0) throw ConfigError(std::string(who) + ": dimensions must be positive");
}

void check_scale(double reg_scale, const char* who) {
  if (!(reg_scale > 0.0)) throw ConfigError(std::string(who) + ": reg_scale must be > 0");
}

}  // namespace

RlsInstance make_lasso(int m, int n, int sparsity, std::uint64_t seed, double reg_scale) {
  check_dims(m, n, "make_lasso");
  if (sparsity < 0 || sparsity > n) throw ConfigError("make_lasso: sparsity out of range");
  check_scale(reg_scale, "make_lasso");
  Rng rng(seed);
  RlsInstance in;
  in.kind = "l1";
  in.A = gaussian_rows_normalized(m, n, rng);
  in.x_true = Vec::Zero(n);
  for (int i : choose(n, sparsity, rng)) in.x_true[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  in.y = noisy(in.A, in.x_true, rng);
  const double lmax = (in.A.transpose() * in.y).lpNorm<Eigen::Infinity>();
  in.reg = l1_norm(reg_scale * lmax);
  return in;
}

RlsInstance make_group_lasso(int m, int n, int group_size, int active_groups, std::uint64_t seed,
                             double reg_scale) {
  check_dims(m, n, "make_group_lasso");
  check_scale(reg_scale, "make_group_lasso");
  if (group_size <= 0 || n % group_size != 0) throw ConfigError("make_group_lasso: group_size must divide n");
  const int ng = n / group_size;
  if (active_groups < 0 || active_groups > ng) throw ConfigError("make_group_lasso: active_groups out of range");
  Rng rng(seed);
  RlsInstance in;
  in.kind = "group";
  in.A = gaussian_rows_normalized(m, n, rng);
  Groups groups;
  for (int g = 0; g < ng; ++g) {
    std::vector<int> gi;
    for (int j = 0; j < group_size; ++j) gi.push_back(g * group_size + j);
    groups.push_back(gi);
  }
  in.x_true = Vec::Zero(n);
  for (int g : choose(ng, active_groups, rng))
    for (int j = 0; j < group_size; ++j) in.x_true[g * group_size + j] = rng.normal();
  in.y = noisy(in.A, in.x_true, rng);
  const Vec c = in.A.transpose() * in.y;
  double gmax = 0.0;
  for (const auto& g : groups) {
    double s = 0.0;
    for (int i : g) s += c[i] * c[i];
    gmax = std::max(gmax, std::sqrt(s));
  }
  in.reg = group_l1l2_norm(groups, reg_scale * gmax);
  return in;
}

RlsInstance make_tv(int m, int n, int jumps, std::uint64_t seed, double reg_scale) {
  check_dims(m, n, "make_tv");
  check_scale(reg_scale, "make_tv");
  if (jumps < 0 || jumps >= n) throw ConfigError("make_tv: jumps out of range");
  Rng rng(seed);
  RlsInstance in;
  in.kind = "tv";
  in.A = gaussian_rows_normalized(m, n, rng);
  const std::vector<int> br = choose(n - 1, jumps, rng);
  in.x_true = Vec::Zero(n);
  double level = rng.normal();
  std::size_t next = 0;
  for (int i = 0; i < n; ++i) {
    in.x_true[i] = level;
    if (next < br.size() && br[next] == i) {
      level = rng.normal();
      ++next;
    }
  }
  in.y = noisy(in.A, in.x_true, rng);
  const Vec c = in.A.transpose() * in.y;
  // dual scale: largest cumulative sum of A^T y
  double cmax = 0.0, cum = 0.0;
  for (int i = 0; i < n; ++i) cmax = std::max(cmax, std::abs(cum += c[i]));
  in.reg = tv1d_norm(reg_scale * cmax);
  return in;
}

RlsInstance make_nuclear(int N, int rank, int m, std::uint64_t seed, double reg_scale) {
  check_dims(m, N, "make_nuclear");
  check_scale(reg_scale, "make_nuclear");
  if (rank < 0 || rank > N) throw ConfigError("make_nuclear: rank out of range");
  Rng rng(seed);
  RlsInstance in;
  in.kind = "nuclear";
  const int n = N * N;
  in.A = gaussian_rows_normalized(m, n, rng);
  Mat U(N, rank), V(N, rank);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < rank; ++j) U(i, j) = rng.normal();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < rank; ++j) V(i, j) = rng.normal();
  const Mat X = U * V.transpose() / std::sqrt(static_cast<double>(N));
  in.x_true = Eigen::Map<const Vec>(X.data(), n);
  in.y = noisy(in.A, in.x_true, rng);
  const Vec c = in.A.transpose() * in.y;
  Eigen::Map<const Mat> C(c.data(), N, N);
  Eigen::JacobiSVD<Mat> svd(C);
  in.reg = nuclear_norm(N, reg_scale * svd.singularValues()(0));
  return in;
}

RlsInstance pinned_rls_instance(const std::string& kind) {
  if (kind == "l1") return make_lasso(256, 256, 8, 2021);
  if (kind == "group") return make_group_lasso(256, 256, 4, 8, 2021);
  if (kind == "tv") return make_tv(256, 256, 8, 7);
  if (kind == "nuclear") return make_nuclear(16, 2, 256, 2023);
  throw ConfigError("unknown RLS instance kind '" + kind + "'");
}

RlsResult run_rls(const std::string& kind, int iterations) {
  RlsResult r;
  r.kind = kind;
  r.instance = pinned_rls_instance(kind);
  const auto& in = r.instance;
  const double s = 0.99 / spectral_norm_sq(in.A);
  const CompositeRLS p(in.A, in.y, in.reg, s);
  r.reference = rls_reference_optimum(p);
  const Vec x0 = Vec::Zero(p.cols());
  r.igahd = igahd_rls_run(p, 3.0, 0.5, x0, x0, iterations, r.reference.value);
  r.fista = igahd_rls_run(p, 3.0, 0.0, x0, x0, iterations, r.reference.value);
  r.igahd.label = "IGAHD";
  r.fista.label = "FISTA";
  auto series = [](const Trace& t, std::vector<double>& k, std::vector<double>& v) {
    for (const auto& e : t.iters) {
      k.push_back(e.k);
      v.push_back(e.f_gap);
    }
  };
  std::vector<double> k1, v1, k2, v2;
  series(r.igahd, k1, v1);
  series(r.fista, k2, v2);
  const double hi = static_cast<double>(iterations);
  r.rate_igahd = rate_fit(k1, v1, RateMode::poly, 50.0, hi);
  r.rate_fista = rate_fit(k2, v2, RateMode::poly, 50.0, hi);
  const std::size_t lim = std::min<std::size_t>(501, v1.size());
  r.osc_igahd = oscillation_count(std::vector<double>(v1.begin(), v1.begin() + static_cast<long>(lim)));
  r.osc_fista = oscillation_count(std::vector<double>(v2.begin(), v2.begin() + static_cast<long>(lim)));
  return r;
}

// ---------------------------------------------------------------------------
// Continuous reproductions

Fig1Result run_fig1(double dt, double T) {
  const SmoothConvexProblem f = make_quadratic({1.0, 1000.0}, Vec());
  Fig1Result r;
  const Vec x0 = Vec::Ones(2), v0 = Vec::Zero(2);
  const std::vector<double> grid = uniform_grid(1.0, T, dt);
  IntegratorOptions o;
  o.rtol = 1e-10;
  o.atol = 1e-14;
  for (double beta : {0.0, 1.0}) {
    DampedSystemSpec spec;
    spec.alpha = 3.1;
    spec.beta = ScalarSchedule::constant(beta);
    spec.b = ScalarSchedule::constant(1.0);
    spec.problem = f;
    spec.t0 = 1.0;
    auto samples = integrate(spec, x0, v0, grid, o);
    std::vector<double> fg;
    for (const auto& s : samples) fg.push_back(s.f_gap);
    (beta == 0.0 ? r.avd : r.din_avd) = std::move(samples);
    (beta == 0.0 ? r.osc_avd : r.osc_din) = oscillation_count(fg);
  }
  return r;
}

std::vector<Fig2Case> run_fig2(double T) {
  // (x1 + x2)^2 / 2 built from the exact Hessian [[1,1],[1,1]]: a rotated eigenbasis leaks
  // roundoff into the kernel direction and the gap then cancels to zero long before T
  SmoothConvexProblem f;
  f.dim = 2;
  f.value = [](const Vec& x) { return 0.5 * (x[0] + x[1]) * (x[0] + x[1]); };
  f.gradient = [](const Vec& x) -> Vec { return Vec::Constant(2, x[0] + x[1]); };
  f.hess_vec = [](const Vec&, const Vec& v) -> Vec { return Vec::Constant(2, v[0] + v[1]); };
  f.lipschitz = 2.0;
  f.opt_value = 0.0;
  f.opt_point = Vec::Zero(2);
  f.hessian = Mat::Ones(2, 2);
  const double alpha = 5.0, t0 = 2.0;
  std::vector<Fig2Case> cases(4);
  cases[0].label = "case 1: beta = 1, b = 1";
  cases[0].spec.beta = ScalarSchedule::constant(1.0);
  cases[0].spec.b = ScalarSchedule::constant(1.0);
  cases[1].label = "case 2: beta = 1, b = 1 + 1/t";
  cases[1].spec.beta = ScalarSchedule::constant(1.0);
  cases[1].spec.b = ScalarSchedule::affine_inverse(1.0, 1.0);
  cases[2].label = "case 3: beta = 0, b = t^2";
  cases[2].spec.beta = ScalarSchedule::constant(0.0);
  cases[2].spec.b = ScalarSchedule::power(1.0, 2.0);
  cases[3].label = "case 4: beta = t^3, b = 5 t^2";
  cases[3].spec.beta = ScalarSchedule::power(1.0, 3.0);
  cases[3].spec.b = ScalarSchedule::power(5.0, 2.0);

  const Vec x0 = Vec::Ones(2), v0 = Vec::Zero(2);
  const Vec xstar = Vec::Zero(2);
  const std::vector<double> grid = geometric_grid(t0, T, 1.01);
  IntegratorOptions o;
  o.rtol = 1e-10;
  o.atol = 1e-300;  // the trajectories decay by many orders; control relative error only
  for (auto& c : cases) {
    c.spec.alpha = alpha;
    c.spec.problem = f;
    c.spec.t0 = t0;
    c.samples = integrate(c.spec, x0, v0, grid, o);
    c.growth_ok = true;
    for (const auto& s : c.samples) {
      const auto g = check_growth_continuous(c.spec, s.t);
      c.growth_ok = c.growth_ok && g.G2 && g.G3;
    }
    const double E0 = c.samples.front().energy;
    c.max_certificate = 0.0;
    std::vector<double> ts, env;
    for (const auto& s : c.samples) {
      const double d = w_and_delta(c.spec, s.t).delta;
      c.max_certificate = std::max(c.max_certificate, d * s.f_gap / E0);
      ts.push_back(s.t);
      env.push_back(s.f_gap);
    }
    // oscillating gaps touch zero; fit the decay of the running upper envelope max_{s >= t} f(s)
    for (std::size_t i = env.size(); i-- > 1;) env[i - 1] = std::max(env[i - 1], env[i]);
    c.rate = rate_fit(ts, env, RateMode::poly, 10.0, T);
  }
  return cases;
}

std::string output_dir(const std::string& fallback) {
  const char* e = std::getenv("HESSDAMP_OUT");
  return (e && *e) ? std::string(e) : fallback;
}

}  // namespace hessdamp
