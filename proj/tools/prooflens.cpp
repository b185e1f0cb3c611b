#include "prooflens/dialectica.hpp"
#include "prooflens/harness.hpp"
#include "prooflens/metastability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace prooflens;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << content;
}

std::string dirname_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

int cmd_translate(const std::string& in, const std::string& mode, const std::string& out) {
  logic::FormulaDoc doc = logic::parse_document(read_file(in));
  std::ostringstream text;
  if (mode == "prenex") {
    doc.root = logic::prenex(doc.root);
    text << logic::render_document(doc);
  } else if (mode == "skolemize") {
    doc.root = logic::skolemize(doc.root);
    text << logic::render_document(doc);
  } else if (mode == "nd") {
    logic::DialecticaForm d = logic::nd(doc.root);
    text << "; nd translation: exists witnesses, forall challenges\n";
    if (!d.outer_prefix.empty()) {
      text << "; outer oracle prefix:";
      for (const auto& v : d.outer_prefix)
        text << " " << v.name << ":" << logic::render_domain(v.domain);
      text << "\n";
    }
    text << "; witnesses:";
    for (const auto& v : d.witnesses)
      text << " " << v.name << ":" << logic::render_domain(v.domain);
    text << "\n; challenges:";
    for (const auto& v : d.challenges)
      text << " " << v.name << ":" << logic::render_domain(v.domain);
    text << "\n";
    doc.root = logic::embed(d);
    text << logic::render_document(doc);
  } else {
    std::cerr << "unknown mode: " << mode << "\n";
    return 2;
  }
  write_output(out, text.str());
  return 0;
}

int cmd_classify(const std::string& in) {
  logic::FormulaDoc doc = logic::parse_document(read_file(in));
  logic::ComplexityClass c = logic::classify(doc.root);
  std::cout << logic::to_string(c.value) << "\n";
  std::cout << "prefix:";
  for (const auto& e : c.witness)
    std::cout << " " << (e.universal ? "forall " : "exists ") << e.var << ":"
              << logic::render_domain(e.domain);
  std::cout << "\n";
  return 0;
}

int cmd_modulus(unsigned n, const std::string& omega_spec, const std::string& f_l1,
                const std::string& eps) {
  real::Modulus omega = real::parse_modulus_spec(omega_spec);
  jackson::UniquenessModulus phi = jackson::uniqueness_modulus(n, omega, parse_rat(f_l1));
  std::cout << rat_str(phi.phi(parse_rat(eps))) << "\n";
  return 0;
}

int cmd_verify(const std::string& config_path, const std::string& out) {
  nlohmann::json config = nlohmann::json::parse(read_file(config_path));
  if (!config.contains("base_dir")) config["base_dir"] = dirname_of(config_path);
  harness::Report report = harness::run_suite(config);
  std::string rendered = report.to_json().dump(2) + "\n";
  write_output(out, rendered);
  std::cerr << "pass=" << report.passes() << " fail=" << report.failures()
            << " inconclusive=" << report.inconclusive() << "\n";
  return report.failures() == 0 ? 0 : 1;
}

logic::FSpec parse_fspec(const std::string& spec) {
  if (spec.rfind("affine:", 0) == 0) {
    auto rest = spec.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw std::runtime_error("affine:a:b expected");
    return logic::FSpec::affine(std::stol(rest.substr(0, colon)),
                                std::stol(rest.substr(colon + 1)));
  }
  if (spec.rfind("table:", 0) == 0) {
    nlohmann::json j = nlohmann::json::parse(read_file(spec.substr(6)));
    long start = 0;
    const nlohmann::json* values = &j;
    if (j.is_object()) {
      if (j.contains("start")) start = j.at("start").get<long>();
      values = &j.at("values");
    }
    std::vector<long> v;
    for (const auto& x : *values) v.push_back(x.get<long>());
    return logic::FSpec::table(start, std::move(v));
  }
  throw std::runtime_error("unknown F spec: " + spec);
}

int cmd_metastable(const std::string& seq_path, const std::string& eps,
                   const std::string& fspec, const std::string& out) {
  nlohmann::json j = nlohmann::json::parse(read_file(seq_path));
  logic::MetastabilityProblem p;
  const nlohmann::json* values = &j;
  if (j.is_object()) {
    if (j.contains("start")) p.start_index = j.at("start").get<long>();
    values = &j.at("values");
  }
  for (const auto& v : *values) p.values.push_back(parse_rat(v.get<std::string>()));
  p.epsilon = parse_rat(eps);
  p.F = parse_fspec(fspec);
  nlohmann::json result;
  try {
    auto found = logic::metastability_search(p);
    result["found_n"] = found.found_n;
    result["scanned_max"] = found.scanned_max;
    result["stable_window"] = {found.window_lo, found.window_hi};
  } catch (const logic::RangeError& e) {
    result["found_n"] = nullptr;
    result["error"] = e.what();
    write_output(out, result.dump(2) + "\n");
    return 1;
  }
  write_output(out, result.dump(2) + "\n");
  return 0;
}

int cmd_report(const std::string& in) {
  nlohmann::json j = nlohmann::json::parse(read_file(in));
  const auto& summary = j.at("summary");
  std::cout << "suite: " << j.value("suite", "?") << "\n";
  for (const auto& c : j.at("checks")) {
    std::string status = c.at("status").get<std::string>();
    if (status != "pass") std::cout << "  [" << status << "] " << c.at("id").get<std::string>() << "\n";
  }
  std::cout << "pass=" << summary.at("pass").get<int>()
            << " fail=" << summary.at("fail").get<int>()
            << " inconclusive=" << summary.at("inconclusive").get<int>() << "\n";
  return summary.at("fail").get<int>() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prooflens: Dialectica translation workbench and certified Jackson verifier"};
  app.require_subcommand(1);

  std::string in, out, mode = "nd", config, omega = "linear:1", f_l1 = "1", eps = "1/10",
              seq, fspec = "affine:2:0";
  unsigned n = 1;

  auto* translate = app.add_subcommand("translate", "skolemize/nd/prenex a formula file");
  translate->add_option("--in", in)->required();
  translate->add_option("--mode", mode)->check(CLI::IsMember({"skolemize", "nd", "prenex"}));
  translate->add_option("--out", out);

  auto* classify = app.add_subcommand("classify", "Pi-classify a formula file");
  classify->add_option("--in", in)->required();

  auto* modulus = app.add_subcommand("modulus", "evaluate the modulus of uniqueness");
  modulus->add_option("--n", n)->required();
  modulus->add_option("--omega", omega)->required();
  modulus->add_option("--f-l1", f_l1)->required();
  modulus->add_option("--eps", eps)->required();

  auto* verify = app.add_subcommand("verify", "run a verification suite config");
  verify->add_option("--config", config)->required();
  verify->add_option("--out", out);

  auto* metastable = app.add_subcommand("metastable", "interval-stability search");
  metastable->add_option("--seq", seq)->required();
  metastable->add_option("--eps", eps)->required();
  metastable->add_option("--f", fspec)->required();
  metastable->add_option("--out", out);

  auto* report = app.add_subcommand("report", "summarize a report file");
  report->add_option("--in", in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (translate->parsed()) return cmd_translate(in, mode, out);
    if (classify->parsed()) return cmd_classify(in);
    if (modulus->parsed()) return cmd_modulus(n, omega, f_l1, eps);
    if (verify->parsed()) return cmd_verify(config, out);
    if (metastable->parsed()) return cmd_metastable(seq, eps, fspec, out);
    if (report->parsed()) return cmd_report(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
