#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fountain/analysis.hpp"
#include "fountain/concat.hpp"
#include "fountain/dist.hpp"
#include "fountain/hamming.hpp"
#include "fountain/ldpc.hpp"
#include "fountain/lt.hpp"
#include "fountain/mldec.hpp"
#include "fountain/packet.hpp"
#include "fountain/sim.hpp"

using namespace fountain;

namespace {

constexpr const char* kPaddingNote =
    "Files shorter than k*symbol_size are zero-padded; the true byte length is "
    "stored little-endian in the final 8 bytes of the padded message, so the "
    "usable capacity is k*symbol_size - 8 bytes.";

int read_binary(const std::string& path, std::vector<uint8_t>& out) {
  if (path == "-") {
    out.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    return 0;
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  out.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  if (f.bad()) {
    std::cerr << "read error on " << path << "\n";
    return 2;
  }
  return 0;
}

int write_binary(const std::string& path, const uint8_t* data, size_t len) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << path << " for writing\n";
      return 2;
    }
    out = &file;
  }
  out->write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
  out->flush();
  if (!*out) {
    std::cerr << "write error on " << path << "\n";
    return 2;
  }
  return 0;
}

struct DistFlags {
  int id = 0;
  double c = 0.1;
  double delta = 0.5;
  std::string file;
};

void add_dist_flags(CLI::App* cmd, DistFlags& df) {
  cmd->add_option("--dist", df.id, "distribution id: 0=soliton 1=robust-soliton 2=raptor 3=table4096 4=table8192 5=file")
      ->check(CLI::Range(0, 5));
  cmd->add_option("--dist-c", df.c, "robust soliton c (dist 1)");
  cmd->add_option("--dist-delta", df.delta, "robust soliton delta (dist 1)");
  cmd->add_option("--dist-file", df.file, "distribution file (dist 5)");
}

std::shared_ptr<const DegreeDistribution> make_dist(const DistFlags& df, uint32_t kprime) {
  switch (df.id) {
    case 0:
      return std::make_shared<DegreeDistribution>(soliton(kprime));
    case 1:
      return std::make_shared<DegreeDistribution>(robust_soliton(kprime, df.c, df.delta));
    case 2:
      return std::make_shared<DegreeDistribution>(raptor_reference(kprime));
    case 3:
      return std::make_shared<DegreeDistribution>(table1_reference(4096).with_k(kprime));
    case 4:
      return std::make_shared<DegreeDistribution>(table1_reference(8192).with_k(kprime));
    default:
      if (df.file.empty())
        throw std::invalid_argument("--dist 5 requires --dist-file");
      return std::make_shared<DegreeDistribution>(load_distribution_file(df.file).with_k(kprime));
  }
}

PrecodeSpec load_precode(const std::string& path) {
  if (path.empty()) return PrecodeSpec{};
  return load_precode_file(path);
}

void store_u64le(uint8_t* p, uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<uint8_t>(v >> (8 * i));
}

uint64_t load_u64le(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

struct EncodeArgs {
  std::string input, output = "-", precode;
  DistFlags dist;
  uint32_t k = 0, symbol_size = 0, count = 0;
  uint64_t seed = 0;
  bool systematic = false;
};

int run_encode(const EncodeArgs& a) {
  std::vector<uint8_t> data;
  if (int rc = read_binary(a.input, data)) return rc;

  const size_t cap = size_t(a.k) * a.symbol_size;
  if (cap < 8) {
    std::cerr << "k*symbol_size must be at least 8 to hold the length trailer\n";
    return 1;
  }
  if (data.size() > cap - 8) {
    std::cerr << "input of " << data.size() << " bytes exceeds capacity " << (cap - 8)
              << " (k*symbol_size - 8)\n";
    return 1;
  }

  PrecodeSpec spec;
  try {
    spec = load_precode(a.precode);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const uint32_t kprime = intermediate_length(a.k, spec);
  ConcatParams cp;
  cp.k = a.k;
  cp.precode = spec;
  cp.lt = CodeParams{kprime, a.symbol_size, make_dist(a.dist, kprime), a.seed};
  cp.systematic = a.systematic;

  std::vector<uint8_t> flat(cap, 0);
  std::memcpy(flat.data(), data.data(), data.size());
  store_u64le(flat.data() + cap - 8, data.size());
  std::vector<Payload> message(a.k);
  for (uint32_t i = 0; i < a.k; ++i)
    message[i].assign(flat.begin() + size_t(i) * a.symbol_size,
                      flat.begin() + size_t(i + 1) * a.symbol_size);

  ConcatEncoder enc(cp, std::move(message));

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (a.output != "-") {
    file.open(a.output, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << a.output << " for writing\n";
      return 2;
    }
    out = &file;
  }
  PacketHeader h;
  h.systematic = a.systematic;
  h.k = a.k;
  h.symbol_size = a.symbol_size;
  h.dist_id = static_cast<DistId>(a.dist.id);
  h.base_seed = a.seed;
  for (uint32_t esi = 0; esi < a.count; ++esi) {
    const EncodingSymbol s = enc.symbol(esi);
    h.esi = s.esi;
    write_packet(*out, h, s.payload);
  }
  out->flush();
  if (!*out) {
    std::cerr << "write error on " << a.output << "\n";
    return 2;
  }
  return 0;
}

struct DecodeArgs {
  std::string input, output = "-", precode, decoder = "bp";
  DistFlags dist;  // c/delta/file only; id comes from the packet headers
};

int run_decode(const DecodeArgs& a) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (a.input != "-") {
    file.open(a.input, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << a.input << "\n";
      return 2;
    }
    in = &file;
  }

  std::vector<PacketHeader> headers;
  std::vector<EncodingSymbol> received;
  try {
    while (auto pkt = read_packet(*in)) {
      headers.push_back(pkt->first);
      received.push_back(EncodingSymbol{pkt->first.esi, std::move(pkt->second)});
    }
  } catch (const std::exception& e) {
    std::cerr << "bad packet stream: " << e.what() << "\n";
    return 1;
  }
  if (headers.empty()) {
    std::cerr << "no packets in input\n";
    return 1;
  }
  const PacketHeader& h0 = headers.front();
  for (const PacketHeader& h : headers) {
    if (h.version != h0.version || h.systematic != h0.systematic || h.k != h0.k ||
        h.symbol_size != h0.symbol_size || h.dist_id != h0.dist_id ||
        h.base_seed != h0.base_seed) {
      std::cerr << "packets disagree on stream parameters\n";
      return 1;
    }
  }

  PrecodeSpec spec;
  try {
    spec = load_precode(a.precode);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  DistFlags df = a.dist;
  df.id = static_cast<int>(h0.dist_id);
  const uint32_t kprime = intermediate_length(h0.k, spec);
  ConcatParams cp;
  cp.k = h0.k;
  cp.precode = spec;
  cp.lt = CodeParams{kprime, h0.symbol_size, make_dist(df, kprime), h0.base_seed};
  cp.systematic = h0.systematic;

  const bool plain = spec.kind == PrecodeKind::None && !cp.systematic;
  DecodeReport rep;
  if (plain) {
    rep = a.decoder == "bp"   ? bp_decode(cp.lt, received)
          : a.decoder == "ml" ? ml_decode(cp.lt, received)
                              : inactivation_decode(cp.lt, received);
  } else {
    rep = concat_decode(cp, received, a.decoder != "bp");
  }

  if (rep.status != DecodeStatus::Success) {
    uint32_t rip_max = 0;
    for (uint32_t v : rep.ripple_trace) rip_max = std::max(rip_max, v);
    std::cerr << "decode stalled: recovered " << rep.recovered_count << " of " << cp.k
              << " symbols; ripple peaked at " << rip_max << " over " << rep.ripple_trace.size()
              << " steps; " << rep.inactivation_count << " inactivations\n";
    return 3;
  }

  const size_t cap = size_t(h0.k) * h0.symbol_size;
  std::vector<uint8_t> flat;
  flat.reserve(cap);
  for (const Payload& p : rep.symbols) flat.insert(flat.end(), p.begin(), p.end());
  if (flat.size() != cap || cap < 8) {
    std::cerr << "internal error: decoded message has wrong size\n";
    return 1;
  }
  const uint64_t len = load_u64le(flat.data() + cap - 8);
  if (len > cap - 8) {
    std::cerr << "corrupt length trailer (" << len << " > " << (cap - 8) << ")\n";
    return 1;
  }
  return write_binary(a.output, flat.data(), static_cast<size_t>(len));
}

struct SimulateArgs {
  std::string output = "-", precode, decoder = "bp";
  DistFlags dist;
  uint32_t k = 0, symbol_size = 1, trials = 100;
  uint64_t seed = 0;
  double epsilon0 = 0.0;
  std::vector<double> overheads;
};

int run_simulate(const SimulateArgs& a) {
  const PrecodeSpec spec = load_precode(a.precode);
  const uint32_t kprime = intermediate_length(a.k, spec);
  CurveConfig cfg;
  cfg.params.k = a.k;
  cfg.params.precode = spec;
  cfg.params.lt = CodeParams{kprime, a.symbol_size, make_dist(a.dist, kprime), 0};
  cfg.params.systematic = false;
  cfg.overheads = a.overheads.empty() ? std::vector<double>{0.05} : a.overheads;
  cfg.decoder = a.decoder == "bp" ? DecoderKind::Bp
                : a.decoder == "ml" ? DecoderKind::Ml
                                    : DecoderKind::Inactivation;
  cfg.trials = a.trials;
  cfg.channel_epsilon0 = a.epsilon0;
  const std::string csv = experiment_csv(run_curve(cfg, a.seed));
  return write_binary(a.output, reinterpret_cast<const uint8_t*>(csv.data()), csv.size());
}

int parse_range(const std::string& s, uint32_t& lo, uint32_t& hi) {
  const size_t dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = static_cast<uint32_t>(std::stoul(s));
    } else {
      lo = static_cast<uint32_t>(std::stoul(s.substr(0, dots)));
      hi = static_cast<uint32_t>(std::stoul(s.substr(dots + 2)));
    }
  } catch (const std::exception&) {
    return 1;
  }
  return lo > hi;
}

struct BoundsArgs {
  std::string output = "-", diff = "0..20";
  DistFlags dist;
  int theorem = 2;
  unsigned q = 2;
  uint32_t mx = 4, k = 0, n = 0;
};

int run_bounds(const BoundsArgs& a) {
  std::ostringstream csv;
  if (a.theorem == 1 || a.theorem == 2) {
    uint32_t lo = 0, hi = 0;
    if (parse_range(a.diff, lo, hi)) {
      std::cerr << "bad --diff range\n";
      return 1;
    }
    if (a.theorem == 1) {
      csv << "diff,full_rank_prob\n";
      char buf[64];
      for (uint32_t d = lo; d <= hi; ++d) {
        std::snprintf(buf, sizeof buf, "%u,%.10g\n", d, full_rank_prob(a.mx, a.mx + d, a.q));
        csv << buf;
      }
    } else {
      csv << "diff,lower,upper,exact\n";
      char buf[128];
      for (uint32_t d = lo; d <= hi; ++d) {
        const BoundResult b = ml_failure_bounds(a.mx, a.mx + d, a.q);
        std::snprintf(buf, sizeof buf, "%u,%.10g,%.10g,%.10g\n", d, b.lower, b.upper, *b.exact);
        csv << buf;
      }
    }
  } else if (a.theorem == 3) {
    if (a.k == 0 || a.n == 0) {
      std::cerr << "--theorem 3 needs --k and --n\n";
      return 1;
    }
    const auto dist = make_dist(a.dist, a.k);
    char buf[96];
    std::snprintf(buf, sizeof buf, "k,n,bit_upper\n%u,%u,%.10g\n", a.k, a.n,
                  symbol_ml_upper(a.k, a.n, *dist));
    csv << buf;
  } else {
    std::cerr << "--theorem must be 1, 2 or 3\n";
    return 1;
  }
  const std::string s = csv.str();
  return write_binary(a.output, reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

struct DesignArgs {
  std::string output = "-";
  uint32_t k = 0, F = 40;
  double eps = 0.0, gamma = 0.0, dgamma = 0.0;
};

int run_design(const DesignArgs& a) {
  const double dg = a.dgamma > 0.0 ? a.dgamma : a.gamma;
  const DesignResult res = design_distribution(a.k, a.eps, a.gamma, dg, a.F);
  const CheckResult chk = check_distribution(res.dist, a.k, a.eps, a.gamma, dg);
  std::cerr << "omega'(1) = " << res.dist.avg_degree() << ", grid check "
            << (chk.pass ? "passed" : "FAILED") << " over " << res.lp.M << " points\n";
  const std::string text = write_distribution(res.dist);
  return write_binary(a.output, reinterpret_cast<const uint8_t*>(text.data()), text.size());
}

struct EvolveArgs {
  std::string output = "-";
  DistFlags dist;
  uint32_t k = 0, max_iters = 100000;
  double eps = 0.0;
};

int run_evolve(const EvolveArgs& a) {
  const auto dist = make_dist(a.dist, a.k);
  const EvolutionTrace tr = and_or_evolution(*dist, a.eps, a.max_iters);
  std::ostringstream csv;
  csv << "l,y\n";
  char buf[64];
  for (size_t l = 0; l < tr.y.size(); ++l) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g\n", l, tr.y[l]);
    csv << buf;
  }
  std::cerr << "fixed point " << tr.fixed_point << " (" << (tr.converged ? "converged" : "cap hit")
            << " after " << tr.y.size() - 1 << " iterations)\n";
  const std::string s = csv.str();
  return write_binary(a.output, reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

struct PrecodeInfoArgs {
  std::string output = "-", type;
  uint32_t r = 3, n = 0, l = 0;
  uint64_t seed = 0;
};

int run_precode_info(const PrecodeInfoArgs& a) {
  std::ostringstream csv;
  if (a.type == "hamming") {
    const std::vector<mpz_class> g = hamming_g_coefficients(a.r);
    csv << "s,correctable\n";
    for (size_t i = 0; i < g.size(); ++i) csv << i + 1 << "," << g[i].get_str() << "\n";
  } else if (a.type == "ldpc") {
    if (a.n == 0 || a.l == 0 || a.r == 0) {
      std::cerr << "--type ldpc needs --n, --l, --r\n";
      return 1;
    }
    const LdpcCode c = ldpc_build(a.n, a.l, a.r, a.seed);
    csv << "n,l,r,checks,collapsed_edges\n"
        << c.n << "," << c.l << "," << c.r << "," << c.H.rows() << "," << c.collapsed_edges
        << "\n";
  } else {
    std::cerr << "--type must be hamming or ldpc\n";
    return 1;
  }
  const std::string s = csv.str();
  return write_binary(a.output, reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fountain code toolkit"};
  app.require_subcommand(1);
  app.footer(kPaddingNote);

  EncodeArgs enc;
  CLI::App* c_enc = app.add_subcommand("encode", "encode a file into a packet stream");
  c_enc->add_option("--input", enc.input, "input file, - for stdin")->required();
  c_enc->add_option("--output", enc.output, "packet stream destination, - for stdout");
  c_enc->add_option("--k", enc.k, "number of source symbols")->required()->check(CLI::PositiveNumber);
  c_enc->add_option("--symbol-size", enc.symbol_size, "bytes per symbol")
      ->required()
      ->check(CLI::PositiveNumber);
  add_dist_flags(c_enc, enc.dist);
  c_enc->add_option("--seed", enc.seed, "base seed for the encoder");
  c_enc->add_option("--count", enc.count, "packets to emit (ESIs 0..count-1)")
      ->required()
      ->check(CLI::PositiveNumber);
  c_enc->add_flag("--systematic", enc.systematic, "systematic stream (ESIs < k carry the message)");
  c_enc->add_option("--precode", enc.precode, "precode spec file");

  DecodeArgs dec;
  CLI::App* c_dec = app.add_subcommand("decode", "decode a packet stream");
  c_dec->add_option("--input", dec.input, "packet stream, - for stdin")->required();
  c_dec->add_option("--output", dec.output, "recovered file, - for stdout");
  c_dec->add_option("--decoder", dec.decoder, "bp | ml | inactivation")
      ->check(CLI::IsMember({"bp", "ml", "inactivation"}));
  c_dec->add_option("--precode", dec.precode,
                    "precode spec file (required for precoded streams; not in the header)");
  c_dec->add_option("--dist-c", dec.dist.c, "robust soliton c (dist 1 streams)");
  c_dec->add_option("--dist-delta", dec.dist.delta, "robust soliton delta (dist 1 streams)");
  c_dec->add_option("--dist-file", dec.dist.file, "distribution file (dist 5 streams)");

  SimulateArgs simargs;
  CLI::App* c_sim = app.add_subcommand("simulate", "Monte Carlo overhead/failure curves as CSV");
  c_sim->add_option("--k", simargs.k, "number of source symbols")->required()->check(CLI::PositiveNumber);
  c_sim->add_option("--symbol-size", simargs.symbol_size, "bytes per symbol");
  add_dist_flags(c_sim, simargs.dist);
  c_sim->add_option("--precode", simargs.precode, "precode spec file");
  c_sim->add_option("--decoder", simargs.decoder, "bp | ml | inactivation")
      ->check(CLI::IsMember({"bp", "ml", "inactivation"}));
  c_sim->add_option("--trials", simargs.trials, "trials per overhead point")->check(CLI::PositiveNumber);
  c_sim->add_option("--overhead", simargs.overheads, "overhead grid points (repeatable)");
  c_sim->add_option("--epsilon0", simargs.epsilon0, "channel erasure probability");
  c_sim->add_option("--seed", simargs.seed, "experiment base seed");
  c_sim->add_option("--output", simargs.output, "CSV destination, - for stdout");

  BoundsArgs bnd;
  CLI::App* c_bnd = app.add_subcommand("bounds", "analytical failure bounds as CSV");
  c_bnd->add_option("--theorem", bnd.theorem, "1 = full-rank probability, 2 = ML failure bracket, 3 = bit-error upper bound");
  c_bnd->add_option("--q", bnd.q, "field size");
  c_bnd->add_option("--mx", bnd.mx, "unknowns (rows swept are mx+diff)");
  c_bnd->add_option("--diff", bnd.diff, "received-minus-unknowns sweep, e.g. 0..20");
  c_bnd->add_option("--k", bnd.k, "source symbols (theorem 3)");
  c_bnd->add_option("--n", bnd.n, "received symbols (theorem 3)");
  add_dist_flags(c_bnd, bnd.dist);
  c_bnd->add_option("--output", bnd.output, "CSV destination, - for stdout");

  DesignArgs des;
  CLI::App* c_des = app.add_subcommand("design", "LP-design a degree distribution");
  c_des->add_option("--k", des.k, "number of source symbols")->required()->check(CLI::PositiveNumber);
  c_des->add_option("--eps", des.eps, "overhead the design targets")->required();
  c_des->add_option("--gamma", des.gamma, "target unrecovered fraction")->required();
  c_des->add_option("--dgamma", des.dgamma, "grid step (defaults to gamma)");
  c_des->add_option("--F", des.F, "maximum degree");
  c_des->add_option("--output", des.output, "distribution file destination, - for stdout");

  EvolveArgs evo;
  CLI::App* c_evo = app.add_subcommand("evolve", "and-or tree density evolution as CSV");
  c_evo->add_option("--k", evo.k, "number of source symbols")->required()->check(CLI::PositiveNumber);
  c_evo->add_option("--eps", evo.eps, "overhead")->required();
  add_dist_flags(c_evo, evo.dist);
  c_evo->add_option("--max-iters", evo.max_iters, "iteration cap");
  c_evo->add_option("--output", evo.output, "CSV destination, - for stdout");

  PrecodeInfoArgs pci;
  CLI::App* c_pci = app.add_subcommand("precode-info", "precode diagnostics as CSV");
  c_pci->add_option("--type", pci.type, "hamming | ldpc")->required();
  c_pci->add_option("--r", pci.r, "hamming redundancy / ldpc check degree");
  c_pci->add_option("--n", pci.n, "ldpc block length");
  c_pci->add_option("--l", pci.l, "ldpc variable degree");
  c_pci->add_option("--seed", pci.seed, "ldpc construction seed");
  c_pci->add_option("--output", pci.output, "CSV destination, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*c_enc) return run_encode(enc);
    if (*c_dec) return run_decode(dec);
    if (*c_sim) return run_simulate(simargs);
    if (*c_bnd) return run_bounds(bnd);
    if (*c_des) return run_design(des);
    if (*c_evo) return run_evolve(evo);
    if (*c_pci) return run_precode_info(pci);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 1;
}
