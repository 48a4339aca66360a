#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "config.hpp"
#include "qlc/errors.hpp"
#include "qlc/flc.hpp"
#include "qlc/parallel.hpp"
#include "qlc/spectral.hpp"
#include "qlc/symbolic.hpp"

namespace qlc::cli {
namespace {

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

Word load_word(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_word(in).word;
}

WordFile load_word_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_word(in);
}

// "1,phi" or "1,pi": exact quadratic names, plus "pi" as a float element.
const Basis* parse_basis(const std::string& spec) {
  std::vector<BasisElement> els;
  std::stringstream ss(spec);
  std::string name;
  while (std::getline(ss, name, ',')) {
    BasisElement el;
    el.name = name;
    if (name == "pi") el.value = std::acos(-1.0L);
    else el.exact = Quadratic::parse(name);
    els.push_back(std::move(el));
  }
  return Basis::make(std::move(els));
}

std::string fmt(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12Le", v);
  return buf;
}

std::string csv_header(const RunContext& ctx, const std::string& columns) {
  return "# config_hash=" + ctx.hash + " config=" + ctx.hashed_config().dump() + "\n" + columns + "\n";
}

ExactLength length_arg(const RunContext& ctx, const std::string& key, const Basis* b) {
  return ExactLength::parse(b, ctx.str(key));
}

std::optional<ExactLength> optional_length(const RunContext& ctx, const std::string& key, const Basis* b) {
  std::string s = ctx.str(key);
  if (s.empty()) return std::nullopt;
  return ExactLength::parse(b, s);
}

std::string length_text(const ExactLength& x) { return x.str(); }

Json length_report(const ExactLength& x) {
  Json j = Json::object();
  j["exact"] = to_json(x);
  j["text"] = x.str();
  j["value"] = static_cast<double>(x.value());
  return j;
}

// Piece set from a file: {"pieces": [...]}, {"profiles": [...]} or a single piece.
PieceSet load_piece_set(const std::string& path) {
  Json j = load_json(path);
  if (j.contains("pieces")) return piece_set_from_json(j);
  if (j.contains("profiles")) {
    Json k = Json::object();
    k["basis"] = j.at("basis");
    k["pieces"] = j.at("profiles");
    return piece_set_from_json(k);
  }
  return PieceSet({piece_from_json(j)});
}

struct LoadedWindow {
  MeasureWindow window;
  Json raw;
};

LoadedWindow load_window(const RunContext& ctx) {
  Json j = load_json(ctx.str("window"));
  return {window_from_json(j), j};
}

Decomposition window_decomposition(const RunContext& ctx, const LoadedWindow& lw) {
  const Basis* b = lw.window.basis();
  std::string pieces_path = ctx.str("pieces");
  auto x0 = optional_length(ctx, "x0", b);
  if (pieces_path.empty()) {
    if (!lw.raw.contains("pieces"))
      throw ValidationError("window carries no piece set; pass --pieces");
    Json k = Json::object();
    k["basis"] = lw.raw.at("basis");
    k["pieces"] = lw.raw.at("pieces");
    PieceSet ps = piece_set_from_json(k);
    if (lw.raw.contains("decomposition") && !x0) {
      Decomposition d = decomposition_from_json(lw.raw.at("decomposition"), ps, b);
      return make_decomposition(lw.window, ps, d.x0, d.labels);
    }
    return decompose(lw.window, ps, x0 ? *x0 : lw.window.origin());
  }
  return decompose(lw.window, load_piece_set(pieces_path), x0 ? *x0 : lw.window.origin());
}

void emit_report(RunContext& ctx, const Json& report) {
  ctx.write_json(ctx.out, report);
  ctx.write_sidecars();
  std::cout << dump(report);
}

void write_word_output(RunContext& ctx, const Word& w, std::map<std::string, std::string> extra) {
  extra["config_hash"] = ctx.hash;
  std::ostringstream os;
  write_word(os, w, extra);
  ctx.write_text(ctx.out, os.str());
  ctx.write_sidecars();
  std::cerr << "wrote " << ctx.out.string() << " (" << w.size() << " symbols)\n";
}

// ---------------------------------------------------------------- generate

int gen_fibonacci(RunContext& ctx) {
  long long order = ctx.integer("iterations");
  if (order < 0 || order > 40) throw ValidationError("iterations must lie in [0, 40]");
  write_word_output(ctx, fibonacci_word(static_cast<std::size_t>(order)), {{"kind", "fibonacci"}});
  return kExitOk;
}

int gen_substitution(RunContext& ctx) {
  std::vector<std::pair<std::string, std::string>> rules;
  for (const auto& r : ctx.list("rules")) {
    auto colon = r.find(':');
    if (colon == std::string::npos) throw ValidationError("rule '" + r + "' must look like a:ab");
    rules.emplace_back(r.substr(0, colon), r.substr(colon + 1));
  }
  long long its = ctx.integer("iterations"), maxlen = ctx.integer("max_length");
  if (its < 0) throw ValidationError("iterations must be >= 0");
  std::optional<std::size_t> cap;
  if (maxlen > 0) cap = static_cast<std::size_t>(maxlen);
  Word w = substitution_word(Substitution::parse(rules), ctx.str("start"), static_cast<std::size_t>(its), cap,
                             ctx.flag("fixed_point"));
  write_word_output(ctx, w, {{"kind", "substitution"}});
  return kExitOk;
}

int gen_circle(RunContext& ctx) {
  long long m = ctx.integer("m"), n = ctx.integer("n");
  if (n < 1) throw ValidationError("n must be >= 1");
  CircleMapResult r = circle_map_word(ctx.str("alpha"), ctx.str("beta"), m, m + n - 1);
  if (r.periodic) std::cerr << "warning: alpha is rational, the word is periodic\n";
  write_word_output(ctx, r.word, {{"kind", "circle"}, {"alpha", ctx.str("alpha")}, {"beta", ctx.str("beta")}});
  return kExitOk;
}

int gen_bernoulli(RunContext& ctx) {
  long long n = ctx.integer("n");
  if (n < 1) throw ValidationError("n must be >= 1");
  Word w = bernoulli_word(ctx.num("p"), static_cast<std::uint64_t>(ctx.integer("seed")), static_cast<std::size_t>(n));
  write_word_output(ctx, w, {{"kind", "bernoulli"}});
  return kExitOk;
}

int gen_suspend(RunContext& ctx) {
  Word w = load_word(ctx.str("word"));
  Json pj = load_json(ctx.str("profiles"));
  const Basis* b = basis_from_json(pj.at("basis"));
  MeasureWindow win;
  std::vector<Piece> pieces;
  if (pj.contains("profiles")) {
    std::vector<Piece> given;
    std::vector<PieceContent> contents;
    bool explicit_lengths = true;
    for (const auto& p : pj.at("profiles")) {
      contents.push_back(content_from_json(p, b));
      explicit_lengths = explicit_lengths && p.contains("length");
    }
    SuspensionParams sp;
    if (explicit_lengths) {
      for (std::size_t i = 0; i < contents.size(); ++i)
        sp.profiles.emplace_back(length_from_json(pj.at("profiles")[i].at("length"), b), contents[i]);
    } else {
      sp = SuspensionParams::from_supports(contents, b);
    }
    if (sp.profiles.size() != w.alphabet.size())
      throw ValidationError("need one profile per alphabet symbol (" + std::to_string(w.alphabet.size()) + ")");
    for (std::size_t i = 0; i < sp.profiles.size(); ++i) sp.profiles[i].label = w.alphabet[i];
    if (!sp.sfdp_guaranteed())
      std::cerr << "warning: two or more profiles are multiples of Lebesgue measure; s.f.d.p is not guaranteed\n";
    win = suspend_with_profiles(w, sp);
    pieces = sp.profiles;
  } else if (pj.contains("lengths")) {
    std::vector<ExactLength> lens;
    for (const auto& l : pj.at("lengths")) lens.push_back(length_from_json(l, b));
    win = suspend(w, lens);
    for (std::size_t i = 0; i < lens.size() && i < w.alphabet.size(); ++i) {
      Rational wt = w.weight(static_cast<int>(i));
      pieces.push_back(wt.is_zero() ? zero_piece(lens[i], w.alphabet[i]) : atom_piece(lens[i], wt, w.alphabet[i]));
    }
  } else {
    throw ValidationError("profiles file needs 'profiles' or 'lengths'");
  }
  Json out = to_json(win);
  PieceSet ps(pieces);
  out["pieces"] = to_json(ps).at("pieces");
  Decomposition d{win.origin(), std::vector<std::size_t>(w.symbols.begin(), w.symbols.end()), ps};
  out["decomposition"] = decomposition_to_json(d);
  ctx.write_json(ctx.out, out);
  ctx.write_sidecars();
  std::cerr << "wrote " << ctx.out.string() << "\n";
  return kExitOk;
}

int gen_kp(RunContext& ctx) {
  const Basis* b = parse_basis(ctx.str("basis"));
  Rational c = Rational::parse(ctx.str("c"));
  Json out = Json::object();
  out["basis"] = basis_to_json(b);
  std::vector<Piece> ps;
  std::size_t i = 0;
  for (const auto& l : ctx.list("lengths")) ps.push_back(atom_piece(ExactLength::parse(b, l), c, "p" + std::to_string(i++)));
  PieceSet set(ps);
  out["profiles"] = to_json(set).at("pieces");
  if (ps.size() == 1) {
    // a single cell doubles as a period piece
    out["length"] = to_json(ps[0].len);
    out["atoms"] = out["profiles"][0]["atoms"];
    out["steps"] = out["profiles"][0]["steps"];
  }
  ctx.write_json(ctx.out, out);
  ctx.write_sidecars();
  std::cerr << "wrote " << ctx.out.string() << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- analyze

int an_sfdp(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  Decomposition dec = window_decomposition(ctx, lw);
  ExactLength ell = length_arg(ctx, "ell", lw.window.basis());
  SfdpResult r = check_sfdp(lw.window, dec, ell);
  Json rep = report_skeleton("sfdp", lw.window, r.ok ? "holds on window" : "fails on window");
  rep["ell"] = length_report(ell);
  if (r.ok) {
    rep["witness"] = Json{{"grid_points_checked", r.grid_points_checked}, {"pieces", dec.pieces.size()}};
  } else {
    const auto& ce = *r.counterexample;
    Json c = Json::object();
    c["y"] = length_report(ce.y);
    c["z"] = length_report(ce.z);
    c["common_prefix_length"] = length_report(ce.common_prefix_length);
    c["next_label_y"] = ce.next_label_y;
    c["next_label_z"] = ce.next_label_z;
    c["next_length_y"] = length_report(ce.next_length_y);
    c["next_length_z"] = length_report(ce.next_length_z);
    rep["counterexample"] = c;
  }
  emit_report(ctx, rep);
  return r.ok ? kExitOk : kExitCounterexample;
}

int an_udp(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  const Basis* b = lw.window.basis();
  PieceSet ps;
  if (ctx.str("pieces").empty()) ps = window_decomposition(ctx, lw).pieces;
  else ps = load_piece_set(ctx.str("pieces"));
  UdpResult r = check_udp(lw.window, ps, length_arg(ctx, "radius", b), optional_length(ctx, "x0", b));
  Json rep = report_skeleton("udp", lw.window, r.unique ? "holds on window" : "fails on window");
  if (r.unique) {
    rep["witness"] = Json{{"positions_checked", r.positions_checked}};
  } else {
    rep["counterexample"] = Json{{"x1", length_report(r.conflict->x1)},
                                 {"label1", r.conflict->label1},
                                 {"x2", length_report(r.conflict->x2)},
                                 {"label2", r.conflict->label2}};
  }
  emit_report(ctx, rep);
  return r.unique ? kExitOk : kExitCounterexample;
}

int an_flp(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  const Basis* b = lw.window.basis();
  std::vector<ExactLength> ls;
  for (const auto& s : ctx.list("L")) ls.push_back(ExactLength::parse(b, s));
  FlpReport r = check_flp(lw.window, length_arg(ctx, "rho", b), ls);
  Json rep = report_skeleton("flp", lw.window, "patch counts on window");
  Json counts = Json::array();
  for (const auto& [l, n] : r.patch_counts) counts.push_back(Json{{"L", length_report(l)}, {"distinct_patches", n}});
  rep["witness"] = Json{{"rho", length_report(r.rho)},
                        {"samples", r.samples},
                        {"samples_without_breakpoint", r.samples_without_breakpoint},
                        {"patch_counts", counts}};
  emit_report(ctx, rep);
  return kExitOk;
}

int an_fep(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  const Basis* b = lw.window.basis();
  FepReport r = check_fep(lw.window, length_arg(ctx, "rho", b), length_arg(ctx, "L", b));
  Json rep = report_skeleton("fep", lw.window, "extension harvest on window");
  Json w = Json::object();
  w["extension_set_size"] = r.extension_set_size;
  w["max_extensions_per_prefix"] = r.max_extensions_per_prefix;
  w["prefixes_checked"] = r.prefixes_checked;
  w["distinct_prefixes"] = r.distinct_prefixes;
  if (r.worst_prefix_at) w["worst_prefix_at"] = length_report(*r.worst_prefix_at);
  Json pl = Json::array();
  for (const auto& l : r.prefix_lengths) pl.push_back(length_report(l));
  w["prefix_lengths"] = pl;
  rep["witness"] = w;
  emit_report(ctx, rep);
  return kExitOk;
}

int an_period(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  const Basis* b = lw.window.basis();
  auto lo = optional_length(ctx, "search_lo", b), hi = optional_length(ctx, "search_hi", b);
  std::optional<std::pair<ExactLength, ExactLength>> range;
  if (lo || hi) range = std::make_pair(lo ? *lo : lw.window.origin(), hi ? *hi : lw.window.end());
  auto r = detect_eventual_period(lw.window, range);
  Json rep = report_skeleton("eventual_period", lw.window, r ? "periodic tail on window" : "no tail period on window");
  if (r) rep["witness"] = Json{{"x0", length_report(r->x0)}, {"period", length_report(r->period)}};
  emit_report(ctx, rep);
  return kExitOk;
}

int an_decompose(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  Decomposition d = window_decomposition(ctx, lw);
  Json rep = report_skeleton("decomposition", lw.window, "decomposed");
  rep["pieces"] = to_json(d.pieces).at("pieces");
  rep["decomposition"] = decomposition_to_json(d);
  emit_report(ctx, rep);
  return kExitOk;
}

int an_recode(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  PieceSet pilots = load_piece_set(ctx.str("pilots"));
  Recoding r = recode_by_occurrences(lw.window, pilots, optional_length(ctx, "max_gap", lw.window.basis()));
  Json rep = report_skeleton("recoding", lw.window, "recoded");
  rep["pieces"] = to_json(r.decomposition.pieces).at("pieces");
  rep["decomposition"] = decomposition_to_json(r.decomposition);
  rep["witness"] = Json{{"occurrences", r.occurrence_points.size()},
                        {"max_gap", length_report(r.max_gap)},
                        {"udp_radius", length_report(r.max_gap + r.pilot_length)}};
  emit_report(ctx, rep);
  return kExitOk;
}

int an_gordon(RunContext& ctx) {
  WordFile wf = load_word_file(ctx.str("word"));
  std::vector<std::int64_t> ps;
  for (const auto& s : ctx.list("p")) ps.push_back(std::stoll(s));
  if (ctx.flag("p_from_cf")) {
    std::string alpha = ctx.str("alpha");
    if (alpha.empty() && wf.header.contains("alpha")) alpha = wf.header.at("alpha");
    if (alpha.empty()) throw ValidationError("--p_from_cf needs --alpha or a word file with an alpha header");
    for (auto q : continued_fraction(alpha, 40).denominators())
      if (3 * static_cast<std::size_t>(q) <= wf.word.size() && std::find(ps.begin(), ps.end(), q) == ps.end())
        ps.push_back(q);
  }
  if (ps.empty()) throw ValidationError("no block lengths: give --p or --p_from_cf");
  auto reports = gordon_scan(wf.word, ps, ctx.threads);
  Json rep = Json::object();
  rep["property"] = "gordon_triple_blocks";
  rep["word_length"] = wf.word.size();
  rep["verdict"] = "density table on window";
  Json table = Json::array();
  for (const auto& r : reports)
    table.push_back(Json{{"p", r.p}, {"tested", r.tested}, {"hits", r.hits}, {"density", r.density}});
  rep["table"] = table;
  emit_report(ctx, rep);
  return kExitOk;
}

int an_cf(RunContext& ctx) {
  long long n = ctx.integer("n");
  if (n < 1) throw ValidationError("n must be >= 1");
  CFExpansion cf;
  Json rep = Json::object();
  rep["property"] = "continued_fraction";
  rep["alpha"] = ctx.str("alpha");
  try {
    cf = continued_fraction(ctx.str("alpha"), static_cast<std::size_t>(n));
  } catch (const PrecisionExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    rep["verdict"] = "precision exhausted";
    rep["trusted_prefix"] = e.trusted_prefix();
    emit_report(ctx, rep);
    return kExitValidation;
  }
  rep["verdict"] = cf.terminated ? "terminates (rational)" : "expanded";
  rep["a0"] = cf.a0;
  rep["coefficients"] = cf.a;
  Json conv = Json::array();
  for (const auto& [p, q] : cf.convergents()) conv.push_back(Json::array({p, q}));
  rep["convergents"] = conv;
  rep["kaminaga"] = Json{{"threshold", 4}, {"count", cf.kaminaga_count()}, {"positions", cf.kaminaga_positions}};
  emit_report(ctx, rep);
  return kExitOk;
}

int an_delone(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  PieceSet ps = load_piece_set(ctx.str("profiles"));
  DeloneMeasureReport r = check_delone_measure_flc(lw.window, ps.pieces());
  Json rep = report_skeleton("delone_measure_flc", lw.window, r.verdict() ? "holds on window" : "fails on window");
  Json w = Json{{"discrete", r.discrete}, {"covered", r.covered}, {"occurrences", r.occurrence_count}};
  if (r.uncovered_at) w["uncovered_at"] = length_report(*r.uncovered_at);
  rep[r.verdict() ? "witness" : "counterexample"] = w;
  emit_report(ctx, rep);
  return r.verdict() ? kExitOk : kExitCounterexample;
}

int an_bound(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  bool ok = check_translation_bound(lw.window, static_cast<long double>(ctx.num("C")));
  Json rep = report_skeleton("translation_bound", lw.window, ok ? "holds on window" : "fails on window");
  rep["C"] = ctx.num("C");
  emit_report(ctx, rep);
  return ok ? kExitOk : kExitCounterexample;
}

int an_occurrences(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  Piece p = piece_from_json(load_json(ctx.str("piece")));
  Occurrences occ = occurrences(lw.window, p);
  Json rep = report_skeleton("occurrences", lw.window, occ.empty() ? "none" : "found");
  Json pts = Json::array();
  for (const auto& x : occ.points) pts.push_back(length_report(x));
  Json ranges = Json::array();
  for (const auto& r : occ.ranges)
    ranges.push_back(Json{{"lo", length_report(r.lo)}, {"hi", length_report(r.hi)}, {"lo_open", r.lo_open}});
  rep["witness"] = Json{{"points", pts}, {"ranges", ranges}};
  emit_report(ctx, rep);
  return kExitOk;
}

// -------------------------------------------------------------------- scan

TransferProgram load_period(const std::string& path) {
  Json j = load_json(path);
  if (j.contains("origin")) return TransferProgram::compile(window_from_json(j));
  if (j.contains("length")) return TransferProgram::compile(piece_from_json(j));
  if (j.contains("profiles") && j.at("profiles").size() == 1) {
    Json k = j.at("profiles")[0];
    k["basis"] = j.at("basis");
    return TransferProgram::compile(piece_from_json(k));
  }
  throw ValidationError(path + " is neither a piece nor a window");
}

std::string scan_csv(const RunContext& ctx, const std::vector<ScanRecord>& recs) {
  std::string out = csv_header(ctx, "E,trace,logscale,gamma,band_flag");
  for (const auto& r : recs)
    out += fmt(r.energy) + "," + fmt(r.trace) + "," + fmt(r.logscale) + "," + fmt(r.gamma) + "," +
           (r.band ? "1" : "0") + "\n";
  return out;
}

int sc_bands(RunContext& ctx) {
  TransferProgram prog = load_period(ctx.str("period"));
  long double emin = ctx.num("emin"), emax = ctx.num("emax"), res = ctx.num("resolution");
  if (!(emax > emin) || !(res > 0)) throw ValidationError("need emax > emin and resolution > 0");
  std::size_t n = static_cast<std::size_t>(std::ceil((emax - emin) / res));
  std::vector<long double> es(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    es[i] = i == n ? emax : emin + (emax - emin) * static_cast<long double>(i) / static_cast<long double>(n);
  auto recs = spectral_scan(prog, es, ctx.threads);
  ctx.write_text(ctx.out, scan_csv(ctx, recs));
  BandStructure bs = floquet_bands(prog, emin, emax, res);
  Json bj = Json::object();
  bj["property"] = "floquet_bands";
  bj["config"] = ctx.hashed_config();
  bj["edge_tolerance"] = static_cast<double>(kBandEdgeTolerance);
  Json arr = Json::array();
  for (const auto& b : bs.bands) arr.push_back(Json{{"lo", fmt(b.lo)}, {"hi", fmt(b.hi)}});
  bj["bands"] = arr;
  bj["total_measure"] = fmt(bs.total_measure);
  ctx.write_json(ctx.sibling(".bands.json"), bj);
  ctx.write_sidecars();
  std::cerr << "wrote " << ctx.out.string() << " and " << ctx.sibling(".bands.json").string() << " (" << bs.bands.size()
            << " bands, measure " << fmt(bs.total_measure) << ")\n";
  return kExitOk;
}

std::vector<long double> energy_list(const RunContext& ctx) {
  long double emin = ctx.num("emin"), emax = ctx.num("emax");
  long long count = ctx.integer("energies");
  if (!(emax > emin) || count < 1) throw ValidationError("need emax > emin and energies >= 1");
  std::mt19937_64 rng(static_cast<std::uint64_t>(ctx.integer("seed")));
  std::vector<long double> es;
  for (long long i = 0; i < count; ++i) {
    long double u = static_cast<long double>(rng() >> 11) * 0x1.0p-53L;
    es.push_back(emin + (emax - emin) * u);
  }
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return es;
}

int sc_lyapunov(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  TransferProgram prog = TransferProgram::compile(lw.window);
  auto es = energy_list(ctx);
  ctx.write_text(ctx.out, scan_csv(ctx, spectral_scan(prog, es, ctx.threads)));
  ctx.write_sidecars();
  std::cerr << "wrote " << ctx.out.string() << " (" << es.size() << " energies)\n";
  return kExitOk;
}

int sc_eigencount(RunContext& ctx) {
  LoadedWindow lw = load_window(ctx);
  TransferProgram prog = TransferProgram::compile(lw.window);
  std::vector<long double> es;
  for (const auto& s : ctx.list("E")) es.push_back(std::stold(s));
  std::vector<std::size_t> counts(es.size());
  parallel_for(es.size(), ctx.threads, [&](std::size_t i) { counts[i] = dirichlet_eigencount(prog, es[i]); });
  std::string out = csv_header(ctx, "E,count");
  for (std::size_t i = 0; i < es.size(); ++i) out += fmt(es[i]) + "," + std::to_string(counts[i]) + "\n";
  ctx.write_text(ctx.out, out);
  ctx.write_sidecars();
  std::cout << out;
  return kExitOk;
}

int sc_trace(RunContext& ctx) {
  long long order = ctx.integer("order");
  if (order < 3 || order > 30) throw ValidationError("order must lie in [3, 30]");
  TraceSequence ts = fibonacci_trace_sequence(ctx.num("energy"), ctx.num("c"), static_cast<std::size_t>(order));
  std::string out = csv_header(ctx, "k,half_trace,recursion_residual,invariant");
  for (std::size_t k = 0; k < ts.x.size(); ++k) {
    out += std::to_string(k) + "," + fmt(ts.x[k]) + "," + fmt(ts.recursion_residual[k]) + ",";
    out += (k >= 1 && k - 1 < ts.invariant.size()) ? fmt(ts.invariant[k - 1]) : std::string("");
    out += "\n";
  }
  ctx.write_text(ctx.out, out);
  ctx.write_sidecars();
  std::cerr << "max recursion residual " << fmt(ts.max_recursion_residual) << ", max invariant drift "
            << fmt(ts.max_invariant_drift) << "\n";
  return kExitOk;
}

}  // namespace

const std::vector<KindSpec>& kinds() {
  static const std::vector<KindSpec> table = {
      {"generate", "fibonacci", "Fibonacci word of the given order (|word| = F(order+1))", ".txt",
       {{"iterations", 10, "word order"}}, gen_fibonacci},
      {"generate", "substitution", "iterate a substitution", ".txt",
       {{"rules", "a:ab,b:a", "comma list of letter:image"},
        {"start", "a", "seed letter"},
        {"iterations", 5, "number of substitution steps"},
        {"max_length", 0, "truncate to this length (0: no cut)"},
        {"fixed_point", false, "require an extending seed"}},
       gen_substitution},
      {"generate", "circle", "circle-map word V(n) = 1 iff frac(n alpha) in (1-beta, 1]", ".txt",
       {{"alpha", nullptr, "rotation number (exact expression or decimal)"},
        {"beta", nullptr, "interval length"},
        {"m", 0, "first n"},
        {"n", 1000, "number of symbols"}},
       gen_circle},
      {"generate", "bernoulli", "i.i.d. word, symbol 0 with probability p", ".txt",
       {{"p", 0.5, "probability of 0"}, {"seed", 0, "RNG seed"}, {"n", 1000, "length"}}, gen_bernoulli},
      {"generate", "suspend", "suspension window of a word", ".json",
       {{"word", nullptr, "word file"}, {"profiles", nullptr, "profiles JSON ('profiles' or 'lengths')"}}, gen_suspend},
      {"generate", "kp", "Kronig-Penney cell profiles (atom c at 0)", ".json",
       {{"c", "3", "atom weight (rational)"},
        {"lengths", "1", "comma list of cell lengths"},
        {"basis", "1", "basis element names, e.g. 1,phi"}},
       gen_kp},
      {"analyze", "sfdp", "simple finite decomposition property", ".json",
       {{"window", nullptr, "window JSON"},
        {"ell", nullptr, "collar length"},
        {"pieces", "", "piece set (default: the window's own)"},
        {"x0", "", "decomposition start"}},
       an_sfdp},
      {"analyze", "udp", "unique decomposition property", ".json",
       {{"window", nullptr, "window JSON"},
        {"radius", nullptr, "R"},
        {"pieces", "", "piece set (default: the window's own)"},
        {"x0", "", "decomposition start"}},
       an_udp},
      {"analyze", "flp", "finite local pieces", ".json",
       {{"window", nullptr, "window JSON"}, {"rho", "1", "rho"}, {"L", "2", "comma list of L >= 2 rho"}}, an_flp},
      {"analyze", "fep", "finite extension property harvest", ".json",
       {{"window", nullptr, "window JSON"}, {"rho", "1", "rho"}, {"L", "2", "extension length"}}, an_fep},
      {"analyze", "period", "eventual periodicity", ".json",
       {{"window", nullptr, "window JSON"}, {"search_lo", "", "earliest x0"}, {"search_hi", "", "latest x0"}},
       an_period},
      {"analyze", "decompose", "decompose a window into pieces", ".json",
       {{"window", nullptr, "window JSON"}, {"pieces", "", "piece set"}, {"x0", "", "start"}}, an_decompose},
      {"analyze", "recode", "recode a window at pilot occurrences", ".json",
       {{"window", nullptr, "window JSON"}, {"pilots", nullptr, "pilot piece(s)"}, {"max_gap", "", "gap bound"}},
       an_recode},
      {"analyze", "gordon", "triple-block (condition K) densities", ".json",
       {{"word", nullptr, "word file"},
        {"p", "", "comma list of block lengths"},
        {"p_from_cf", false, "add continued-fraction denominators of alpha"},
        {"alpha", "", "alpha for --p_from_cf (default: word header)"}},
       an_gordon},
      {"analyze", "cf", "continued fraction and Kaminaga report", ".json",
       {{"alpha", nullptr, "exact expression or decimal digits"}, {"n", 20, "coefficients"}}, an_cf},
      {"analyze", "delone", "Delone measure of finite local complexity", ".json",
       {{"window", nullptr, "window JSON"}, {"profiles", nullptr, "profile pieces"}}, an_delone},
      {"analyze", "bound", "translation bound |mu|(J) <= C max(|J|, 1)", ".json",
       {{"window", nullptr, "window JSON"}, {"C", 1.0, "bound"}}, an_bound},
      {"analyze", "occurrences", "occurrences of a piece", ".json",
       {{"window", nullptr, "window JSON"}, {"piece", nullptr, "piece JSON"}}, an_occurrences},
      {"scan", "bands", "Floquet bands of a period piece", ".csv",
       {{"period", nullptr, "piece or window JSON"},
        {"emin", 0.0, "lowest energy"},
        {"emax", 50.0, "highest energy"},
        {"resolution", 0.01, "grid spacing"}},
       sc_bands},
      {"scan", "lyapunov", "Lyapunov exponents at random energies", ".csv",
       {{"window", nullptr, "window JSON"},
        {"energies", 100, "number of energies"},
        {"emin", 1.0, "lowest energy"},
        {"emax", 20.0, "highest energy"},
        {"seed", 7, "RNG seed"}},
       sc_lyapunov},
      {"scan", "eigencount", "Dirichlet eigenvalue counts", ".csv",
       {{"window", nullptr, "window JSON"}, {"E", "1,10", "comma list of energies"}}, sc_eigencount},
      {"scan", "trace", "Fibonacci trace-map diagnostic", ".csv",
       {{"energy", 2.0, "energy"}, {"c", 3.0, "atom weight"}, {"order", 12, "highest order"}}, sc_trace},
  };
  return table;
}

}  // namespace qlc::cli
