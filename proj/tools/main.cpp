// Command-line front end: spectrum / transfer / expand / mirror / scan.
// Every output embeds the resolved run configuration and the artifact
// version so runs can be reproduced from their own reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinchain/chain.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/logical_code.hpp"
#include "spinchain/pauli_algebra.hpp"
#include "spinchain/protocols.hpp"
#include "spinchain/state.hpp"
#include "spinchain/version.hpp"

using nlohmann::json;
using namespace spinchain;

namespace {

struct CommonArgs {
  int n = 4;
  double j = 1.0;
  double b = 0.0;
  std::string couplings;  // comma list -> custom profile
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
  std::string config_path;
};

void add_chain_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--n", args.n, "chain length");
  cmd->add_option("--j", args.j, "global coupling J");
  cmd->add_option("--b", args.b, "magnetic field B");
  cmd->add_option("--couplings", args.couplings,
                  "comma-separated custom couplings (overrides profile)");
  cmd->add_option("--tol", args.tol, "tolerance");
  cmd->add_option("--out", args.out, "output file (stdout when omitted)");
  cmd->add_option("--format", args.format, "json or csv");
  cmd->add_option("--config", args.config_path,
                  "JSON config file; its values override flags");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

ChainSpec make_spec(const CommonArgs& args) {
  ChainSpec spec;
  spec.n = args.n;
  spec.j = args.j;
  spec.b = args.b;
  if (!args.couplings.empty()) {
    spec.profile = CouplingProfile::Custom;
    spec.custom = parse_list(args.couplings);
  }
  spec.validate();
  return spec;
}

// The config file overrides flag values key by key.
void overlay_config(CommonArgs& args, json& extra) {
  if (args.config_path.empty()) return;
  std::ifstream in(args.config_path);
  if (!in) throw std::runtime_error("cannot open config " + args.config_path);
  json cfg = json::parse(in);
  if (cfg.contains("n")) args.n = cfg["n"].get<int>();
  if (cfg.contains("j")) args.j = cfg["j"].get<double>();
  if (cfg.contains("b")) args.b = cfg["b"].get<double>();
  if (cfg.contains("tol")) args.tol = cfg["tol"].get<double>();
  if (cfg.contains("format")) args.format = cfg["format"].get<std::string>();
  if (cfg.contains("couplings")) {
    if (cfg["couplings"].is_array()) {
      std::string joined;
      for (const auto& v : cfg["couplings"]) {
        if (!joined.empty()) joined += ",";
        joined += std::to_string(v.get<double>());
      }
      args.couplings = joined;
    } else {
      args.couplings = cfg["couplings"].get<std::string>();
    }
  }
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (extra.contains(it.key())) extra[it.key()] = it.value();
}

json base_config(const CommonArgs& args, const std::string& command) {
  json cfg;
  cfg["command"] = command;
  cfg["chain"] = to_json(make_spec(args));
  cfg["tol"] = args.tol;
  cfg["format"] = args.format;
  return cfg;
}

void emit(const CommonArgs& args, const std::string& payload) {
  if (args.out.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
  } else {
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot write " + args.out);
    out << payload;
  }
}

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  return std::to_string(
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count());
}

std::string dump_report(json report) {
  report["version"] = kVersion;
  report["timestamp"] = timestamp();
  return report.dump(2) + "\n";
}

WireStateSpec make_wire(const std::string& kind, std::uint64_t seed, int rank) {
  if (kind == "all-down") return WireStateSpec::all_down();
  if (kind == "random-pure") return WireStateSpec::random_pure(seed);
  if (kind == "random-mixed") return WireStateSpec::random_mixed(seed, rank);
  if (kind.rfind("file:", 0) == 0) {
    std::ifstream in(kind.substr(5));
    if (!in) throw std::runtime_error("cannot open wire state file");
    return WireStateSpec::explicit_state_of(state_from_json(json::parse(in)));
  }
  throw std::runtime_error("unknown wire kind: " + kind);
}

int cmd_spectrum(CommonArgs& args) {
  json extra;
  overlay_config(args, extra);
  ChainSpec spec = make_spec(args);
  SpectrumReport report = spmc_check(spec, args.tol);
  json out;
  out["config"] = base_config(args, "spectrum");
  out["report"] = to_json(report);
  emit(args, dump_report(out));
  return report.spmc_pass ? 0 : 1;
}

int cmd_mirror(CommonArgs& args) {
  json extra;
  overlay_config(args, extra);
  ChainSpec spec = make_spec(args);
  MirrorReport report = verify_mirror_relations(spec, args.tol);
  json out;
  out["config"] = base_config(args, "mirror");
  out["report"] = to_json(report);
  emit(args, dump_report(out));
  return report.all_pass ? 0 : 1;
}

struct TransferArgs {
  std::string protocol = "code2";
  std::string bloch = "1,0,0";
  std::string wire = "all-down";
  std::uint64_t seed = 0;
  int rank = 4;
  int samples = 0;
};

int cmd_transfer(CommonArgs& args, TransferArgs& targs) {
  json extra;
  extra["protocol"] = targs.protocol;
  extra["bloch"] = targs.bloch;
  extra["wire"] = targs.wire;
  extra["seed"] = targs.seed;
  overlay_config(args, extra);
  targs.protocol = extra["protocol"].get<std::string>();
  targs.bloch = extra["bloch"].get<std::string>();
  targs.wire = extra["wire"].get<std::string>();
  targs.seed = extra["seed"].get<std::uint64_t>();

  ChainSpec spec = make_spec(args);
  auto rv = parse_list(targs.bloch);
  if (rv.size() != 3) throw std::runtime_error("--bloch needs x,y,z");
  BlochVector r{rv[0], rv[1], rv[2]};
  WireStateSpec wire = make_wire(targs.wire, targs.seed, targs.rank);

  json cfg = base_config(args, "transfer");
  cfg["protocol"] = targs.protocol;
  cfg["bloch"] = to_json(r);
  cfg["wire"] = targs.wire;
  cfg["seed"] = targs.seed;

  if (targs.samples > 0) {
    BatchStats stats =
        batch_average(spec, targs.protocol, targs.samples, targs.seed);
    if (args.format == "csv") {
      std::string payload = "# config: " + cfg.dump() + "\n" +
                            "# version: " + std::string(kVersion) + "\n" +
                            batch_csv(stats);
      emit(args, payload);
    } else {
      json out;
      out["config"] = cfg;
      out["stats"] = to_json(stats);
      emit(args, dump_report(out));
    }
    return 0;
  }

  TransferReport report;
  TransferOptions opts;
  opts.track_wire = (targs.protocol == "code2" && spec.n <= 10);
  if (targs.protocol == "code2") {
    report = transfer_two_qubit_code(spec, r, wire, opts);
  } else if (targs.protocol == "single-init") {
    report = transfer_single_qubit_initialized(spec, r);
  } else if (targs.protocol == "single-uninit") {
    report = transfer_single_qubit_uninitialized(spec, r, wire);
  } else if (targs.protocol == "difranco") {
    report = transfer_difranco(spec, r, wire);
  } else {
    throw std::runtime_error("unknown protocol: " + targs.protocol);
  }

  json out;
  out["config"] = cfg;
  out["report"] = to_json(report);
  emit(args, dump_report(out));

  // Perfection-promising protocols fail loudly; diagnostics always exit 0.
  bool claims = (targs.protocol == "code2" || targs.protocol == "single-init" ||
                 targs.protocol == "difranco") &&
                spec.profile == CouplingProfile::Engineered;
  if (claims && report.fidelity < 1.0 - args.tol) return 1;
  return 0;
}

struct ExpandArgs {
  std::string op;
  bool halved = false;
  int depth = 1;
  bool verify_matrix = false;
};

int cmd_expand(CommonArgs& args, ExpandArgs& eargs) {
  json extra;
  overlay_config(args, extra);
  ChainSpec spec = make_spec(args);
  PauliOperator h = build_hamiltonian_symbolic(args.n);
  PauliOperator op = parse_pauli_operator(eargs.op, args.n, eargs.halved);
  auto ads = nested_adjoint(h, op, eargs.depth);

  json cfg = base_config(args, "expand");
  cfg["op"] = eargs.op;
  cfg["halved"] = eargs.halved;
  cfg["depth"] = eargs.depth;

  std::ostringstream text;
  for (std::size_t d = 0; d < ads.size(); ++d) {
    text << "# depth " << d << " (" << ads[d].term_count() << " terms)\n";
    text << ads[d].str();
  }

  double worst = 0.0;
  if (eargs.verify_matrix) {
    auto cpl = spec.couplings();
    Eigen::MatrixXcd hm = to_matrix(h, cpl);
    Eigen::MatrixXcd om = to_matrix(op, cpl);
    for (int d = 1; d <= eargs.depth; ++d) {
      om = (hm * om - om * hm).eval();
      worst = std::max(worst,
                       (to_matrix(ads[static_cast<std::size_t>(d)], cpl) - om)
                           .norm());
    }
  }

  json out;
  out["config"] = cfg;
  out["operator_dump"] = text.str();
  if (eargs.verify_matrix) out["matrix_residual"] = worst;
  emit(args, dump_report(out));
  if (eargs.verify_matrix && worst > 1e-12) return 1;
  return 0;
}

struct ScanArgs {
  std::string protocol = "code2";
  std::string bloch = "1,0,0";
  std::string wire = "all-down";
  std::uint64_t seed = 0;
  int rank = 4;
  double tmin = 0.0;
  double tmax = -1.0;  // default 2 pi / J
  int points = 201;
};

int cmd_scan(CommonArgs& args, ScanArgs& sargs) {
  json extra;
  overlay_config(args, extra);
  ChainSpec spec = make_spec(args);
  auto rv = parse_list(sargs.bloch);
  if (rv.size() != 3) throw std::runtime_error("--bloch needs x,y,z");
  BlochVector r{rv[0], rv[1], rv[2]};
  WireStateSpec wire = make_wire(sargs.wire, sargs.seed, sargs.rank);

  double tmax = sargs.tmax < 0 ? 2.0 * M_PI / spec.j : sargs.tmax;
  std::vector<double> grid;
  for (int i = 0; i < sargs.points; ++i)
    grid.push_back(sargs.points == 1
                       ? sargs.tmin
                       : sargs.tmin +
                             (tmax - sargs.tmin) * i / (sargs.points - 1));
  auto scan = fidelity_scan(spec, sargs.protocol, r, wire, grid);

  json cfg = base_config(args, "scan");
  cfg["protocol"] = sargs.protocol;
  cfg["bloch"] = to_json(r);
  cfg["wire"] = sargs.wire;
  cfg["seed"] = sargs.seed;
  cfg["tmin"] = sargs.tmin;
  cfg["tmax"] = tmax;
  cfg["points"] = sargs.points;

  if (args.format == "csv") {
    std::ostringstream payload;
    payload.precision(17);
    payload << "# config: " << cfg.dump() << "\n";
    payload << "# version: " << kVersion << "\n";
    payload << "t,fidelity\n";
    for (const auto& [t, f] : scan) payload << t << "," << f << "\n";
    emit(args, payload.str());
  } else {
    json rows = json::array();
    for (const auto& [t, f] : scan) rows.push_back({{"t", t}, {"fidelity", f}});
    json out;
    out["config"] = cfg;
    out["scan"] = rows;
    emit(args, dump_report(out));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulator for perfect state transfer on engineered "
               "spin chains"};
  app.require_subcommand(1);

  CommonArgs spectrum_args, mirror_args, transfer_args, expand_args, scan_args;
  spectrum_args.tol = 1e-8;
  TransferArgs targs;
  ExpandArgs eargs;
  ScanArgs sargs;

  auto* spectrum = app.add_subcommand(
      "spectrum", "one-excitation spectrum and parity matching check");
  add_chain_flags(spectrum, spectrum_args);

  auto* mirror = app.add_subcommand(
      "mirror", "verify the transfer-time mirror relations");
  add_chain_flags(mirror, mirror_args);

  auto* transfer = app.add_subcommand("transfer", "run a transfer protocol");
  add_chain_flags(transfer, transfer_args);
  transfer->add_option("--protocol", targs.protocol,
                       "code2 | single-init | single-uninit | difranco");
  transfer->add_option("--bloch", targs.bloch, "input Bloch vector x,y,z");
  transfer->add_option("--wire", targs.wire,
                       "all-down | random-pure | random-mixed | file:<path>");
  transfer->add_option("--seed", targs.seed, "wire RNG seed");
  transfer->add_option("--rank", targs.rank, "random mixed wire rank");
  transfer->add_option("--samples", targs.samples,
                       "batch mode: average over this many seeded samples");

  auto* expand = app.add_subcommand(
      "expand",
      "nested commutators of an operator with the chain Hamiltonian");
  add_chain_flags(expand, expand_args);
  expand->add_option("--op", eargs.op, "operator, e.g. \"X1 X2 + Y1 Y2\"")
      ->required();
  expand->add_flag("--halved", eargs.halved,
                   "scale each term by (1/2)^weight (halved spin input)");
  expand->add_option("--depth", eargs.depth, "adjoint depth");
  expand->add_flag("--verify-matrix", eargs.verify_matrix,
                   "cross-check against the dense matrix commutator");

  auto* scan = app.add_subcommand("scan", "fidelity over a time grid");
  add_chain_flags(scan, scan_args);
  scan->add_option("--protocol", sargs.protocol,
                   "code2 | single-init | single-uninit");
  scan->add_option("--bloch", sargs.bloch, "input Bloch vector x,y,z");
  scan->add_option("--wire", sargs.wire, "wire kind");
  scan->add_option("--seed", sargs.seed, "wire RNG seed");
  scan->add_option("--rank", sargs.rank, "random mixed wire rank");
  scan->add_option("--tmin", sargs.tmin, "grid start");
  scan->add_option("--tmax", sargs.tmax, "grid end (default 2 pi / J)");
  scan->add_option("--points", sargs.points, "grid size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return cmd_spectrum(spectrum_args);
    if (mirror->parsed()) return cmd_mirror(mirror_args);
    if (transfer->parsed()) return cmd_transfer(transfer_args, targs);
    if (expand->parsed()) return cmd_expand(expand_args, eargs);
    if (scan->parsed()) return cmd_scan(scan_args, sargs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
