// hcx: build box and Hom complexes of r-graphs, verify the matching and
// certify the deformation between them.
//
// Exit codes: 0 success, 2 verification failure, 3 size guard, 4 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hcx/boxcx.hpp"
#include "hcx/collapse.hpp"
#include "hcx/homcx.hpp"
#include "hcx/homology.hpp"
#include "hcx/morse.hpp"
#include "hcx/rgraph.hpp"
#include "json.hpp"

namespace {

enum Exit { Ok = 0, VerifyFailed = 2, TooLarge = 3, BadInput = 4 };

struct Config {
  std::string input;
  std::string complex = "box";
  std::string coeff = "z";
  std::size_t max_cells = 1'000'000;
  std::string out;
  std::string dot;
  std::string certificate;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text << '\n';
}

hcx::Limits limits_of(const Config& cfg) {
  hcx::Limits l;
  l.max_cells = cfg.max_cells;
  return l;
}

hcx::Coeff coeff_of(const Config& cfg) { return cfg.coeff == "z2" ? hcx::Coeff::Z2 : hcx::Coeff::Z; }

hcx::GComplex build_complex(const hcx::RGraph& h, const std::string& which, const hcx::Limits& limits) {
  if (which == "box" || which == "sd-box") {
    auto box = hcx::box_edge(h, limits);
    if (which == "box") return box.gc;
    return {hcx::barycentric_subdivision(box.gc.complex, limits), box.gc.action.on_cells(box.gc.complex)};
  }
  auto hom = hcx::hom_complex(h, limits);
  if (which == "hom") return hom.gc;
  return {hcx::barycentric_subdivision(hom.gc.complex, limits), hom.gc.action.on_cells(hom.gc.complex)};
}

int cmd_build(const Config& cfg) {
  const auto limits = limits_of(cfg);
  const auto h = hcx::rgraph_from_json(read_file(cfg.input));
  const auto gc = build_complex(h, cfg.complex, limits);
  gc.complex.check_invariants();
  hcx::check_action(gc.complex, gc.action);
  if (!cfg.out.empty()) write_file(cfg.out, hcx::to_json(gc.complex));
  if (!cfg.dot.empty()) write_file(cfg.dot, hcx::to_dot(gc.complex));
  nlohmann::ordered_json j;
  j["complex"] = cfg.complex;
  j["cells"] = gc.complex.size();
  j["f_vector"] = gc.complex.f_vector();
  j["facets"] = gc.complex.facets().size();
  std::cout << j.dump() << '\n';
  return Ok;
}

int cmd_verify(const Config& cfg) {
  const auto limits = limits_of(cfg);
  const auto h = hcx::rgraph_from_json(read_file(cfg.input));
  const auto mb = hcx::build_matching(h, limits);
  const auto crit = hcx::iso_criterion(h, mb.box, limits);
  const auto collapse = hcx::matching_to_collapse(mb.sd, mb.matching, limits);

  std::size_t s1 = 0;
  for (auto t : mb.matching.tags) s1 += t == hcx::ChainTag::Sigma1;
  nlohmann::ordered_json j;
  j["box_cells"] = mb.box.gc.complex.size();
  j["sd_cells"] = mb.sd.complex.size();
  j["D"] = mb.matching.sigma.size() + mb.matching.mu.size();
  j["sigma1"] = s1;
  j["sigma2"] = mb.matching.sigma.size() - s1;
  j["critical"] = mb.matching.critical.size();
  j["all_ip_fixed"] = crit.all_ip_fixed;
  j["obstruction_free"] = crit.obstruction_free;
  j["collapse_steps"] = collapse.certificate.steps.size();
  j["status"] = mb.matching.sigma.empty() ? "D empty; complexes isomorphic" : "all checks pass";
  if (crit.all_ip_fixed != crit.obstruction_free) {
    std::cerr << "isomorphism criterion disagrees\n";
    return VerifyFailed;
  }
  if (!cfg.certificate.empty()) {
    nlohmann::ordered_json cert;
    cert["matching"] = nlohmann::ordered_json::parse(hcx::matching_json(mb.sd, mb.matching));
    cert["collapse"] = nlohmann::ordered_json::parse(hcx::certificate_json(collapse.certificate));
    write_file(cfg.certificate, cert.dump());
    // read back and replay on a fresh build
    const auto written = nlohmann::json::parse(read_file(cfg.certificate));
    const auto fresh = build_complex(h, "sd-box", limits);
    hcx::replay(fresh, hcx::certificate_from_json(written.at("collapse").dump()));
  }
  if (!cfg.out.empty()) write_file(cfg.out, j.dump());
  std::cout << j.dump() << '\n';
  return Ok;
}

int cmd_theorem(const Config& cfg) {
  const auto limits = limits_of(cfg);
  const auto h = hcx::rgraph_from_json(read_file(cfg.input));
  const auto t = hcx::main_theorem_certificate(h, limits);
  const auto agreement = hcx::homology_agreement(h, coeff_of(cfg), limits);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(hcx::theorem_json(h, t));
  j["homology_box"] = nlohmann::ordered_json::parse(hcx::homology_json(agreement.box));
  j["homology_hom"] = nlohmann::ordered_json::parse(hcx::homology_json(agreement.hom));
  j["homology_agree"] = agreement.agree;
  if (!cfg.certificate.empty()) {
    nlohmann::ordered_json cert;
    cert["hom"] = nlohmann::ordered_json::parse(hcx::certificate_json(t.hom_to_sd.certificate));
    cert["sd-box"] = nlohmann::ordered_json::parse(hcx::certificate_json(t.box_collapse.certificate));
    cert["box"] = nlohmann::ordered_json::parse(hcx::certificate_json(t.box_to_sd.certificate));
    write_file(cfg.certificate, cert.dump());
  }
  if (!cfg.out.empty()) write_file(cfg.out, j.dump());
  std::cout << j.dump() << '\n';
  return agreement.agree ? Ok : VerifyFailed;
}

// Re-checks a certificate written by `verify` or `theorem` against a freshly
// built complex. The --complex selector picks the stage.
int cmd_replay(const Config& cfg) {
  const auto limits = limits_of(cfg);
  const auto h = hcx::rgraph_from_json(read_file(cfg.input));
  nlohmann::json file;
  try {
    file = nlohmann::json::parse(read_file(cfg.certificate));
  } catch (const nlohmann::json::exception& e) {
    throw hcx::Error(hcx::ErrorCode::ParseError, e.what());
  }
  std::string key = cfg.complex;
  if (file.contains("collapse")) {
    if (cfg.complex != "sd-box") throw InputError("a verify certificate replays on --complex sd-box");
    key = "collapse";
  }
  if (!file.contains(key)) throw InputError("certificate has no stage for " + cfg.complex);
  const auto cert = hcx::certificate_from_json(file.at(key).dump());
  const auto start = build_complex(h, cfg.complex, limits);
  const auto end = hcx::replay(start, cert);
  nlohmann::ordered_json j;
  j["complex"] = cfg.complex;
  j["steps"] = cert.steps.size();
  j["end_cells"] = end.size();
  j["status"] = "replayed";
  std::cout << j.dump() << '\n';
  return Ok;
}

int exit_code(hcx::ErrorCode code) {
  switch (code) {
    case hcx::ErrorCode::SizeGuard: return TooLarge;
    case hcx::ErrorCode::EdgeWrongArity:
    case hcx::ErrorCode::DegenerateEdge:
    case hcx::ErrorCode::UnknownVertex:
    case hcx::ErrorCode::DuplicateEdge:
    case hcx::ErrorCode::InvalidParams:
    case hcx::ErrorCode::EmptyPart:
    case hcx::ErrorCode::ParseError: return BadInput;
    default: return VerifyFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Box and Hom complexes of r-graphs"};
  app.require_subcommand(1);
  Config cfg;
  const std::vector<std::string> complexes{"box", "hom", "sd-box", "sd-hom"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "r-graph JSON file")->required();
    sub->add_option("--max-cells", cfg.max_cells, "size guard")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
    sub->add_option("--out", cfg.out, "write the JSON result here");
  };
  auto* build = app.add_subcommand("build", "build a complex and dump it");
  common(build);
  build->add_option("--complex", cfg.complex)->check(CLI::IsMember(complexes));
  build->add_option("--dot", cfg.dot, "write the Hasse diagram as DOT");
  auto* verify = app.add_subcommand("verify", "build and verify the matching on sd B_edge");
  common(verify);
  verify->add_option("--certificate", cfg.certificate, "write matching and collapse certificate");
  auto* theorem = app.add_subcommand("theorem", "certify Hom and B_edge and compare homology");
  common(theorem);
  theorem->add_option("--coeff", cfg.coeff)->check(CLI::IsMember({"z", "z2"}));
  theorem->add_option("--certificate", cfg.certificate, "write the deformation certificates");
  auto* replay = app.add_subcommand("replay", "re-check a certificate on a fresh build");
  common(replay);
  replay->add_option("--complex", cfg.complex)->check(CLI::IsMember(complexes));
  replay->add_option("--certificate", cfg.certificate)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Ok : BadInput;
  }

  try {
    if (*build) return cmd_build(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*theorem) return cmd_theorem(cfg);
    if (*replay) return cmd_replay(cfg);
  } catch (const hcx::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return BadInput;
  }
  return BadInput;
}
