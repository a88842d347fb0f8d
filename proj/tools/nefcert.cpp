#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nefcert/certify.hpp"
#include "nefcert/cone.hpp"
#include "nefcert/datum.hpp"
#include "nefcert/errors.hpp"
#include "nefcert/hasse.hpp"
#include "nefcert/io.hpp"
#include "nefcert/oracle.hpp"
#include "nefcert/strata.hpp"

namespace {

using namespace nefcert;

InputDocument load_input(const std::string& path) {
  if (path.empty()) return parse_input(std::cin);
  std::ifstream file(path);
  if (!file) throw input_error("cannot open input file '" + path + "'");
  return parse_input(file);
}

int block_index(const ShimuraDatum& datum, const std::string& name) {
  for (int b = 0; b < datum.block_count(); ++b)
    if (datum.block(b).name == name) return b;
  throw input_error("unknown block '" + name + "'");
}

int run_check(const InputDocument& doc, bool nef_mode) {
  const ShimuraDatum& d = *doc.datum;
  const ConeReport report = nef_mode ? nef_check(d, doc.weights) : ample_check(d, doc.weights);
  for (const auto& c : report.constraints)
    std::cout << format_constraint(d, c, !nef_mode) << "\n";
  std::cout << (nef_mode ? "nef: " : "ample: ") << (report.ok ? "PASS" : "FAIL") << "\n";
  return report.ok ? 0 : 1;
}

int run_matrix(const InputDocument& doc, const std::string& name) {
  const int b = block_index(*doc.datum, name);
  std::cout << "H =\n" << format_matrix(hasse_matrix(*doc.datum, b));
  std::cout << "H^-1 =\n" << format_matrix(hasse_inverse_closed_form(*doc.datum, b));
  return 0;
}

int run_lambda(const InputDocument& doc, const std::string& name) {
  const ShimuraDatum& d = *doc.datum;
  const int b = block_index(d, name);
  const RationalVector lambda =
      lambda_coefficients(d, b, block_weight_vector(d, b, doc.weights));
  const auto& cycle = d.signature_one_cycle(b);
  for (std::size_t i = 0; i < cycle.size(); ++i)
    std::cout << "lambda[" << format_embedding(d, cycle[i])
              << "] = " << lambda(static_cast<Eigen::Index>(i)) << "\n";
  return 0;
}

int run_strata(const InputDocument& doc, int max_size) {
  if (max_size < 1) throw input_error("--max-size must be at least 1");
  const ShimuraDatum& d = *doc.datum;
  for (const StratumEntry& entry : enumerate_strata(d, max_size)) {
    std::string i_t = "n/a";
    std::string sig1_prime = "n/a";
    if (entry.cls == StratumClass::Empty) {
      i_t = "-";
      sig1_prime = "-";
    } else if (entry.cls != StratumClass::Full) {
      const StratumDescriptor desc = describe_stratum(d, entry.stratum);
      i_t = format_stratum_set(d, desc.padding);
      std::set<EmbeddingId> remaining;
      for (const EmbeddingId& tau : desc.induced->signature_one_cycle(entry.block))
        remaining.insert(tau);
      sig1_prime = format_stratum_set(d, remaining);
    }
    std::cout << d.block(entry.block).name << " T=" << format_stratum_set(d, entry.stratum)
              << " class=" << to_string(entry.cls) << " I_T=" << i_t << " sig1'=" << sig1_prime
              << "\n";
  }
  return 0;
}

int run_induce(const InputDocument& doc, const std::string& stratum_text) {
  const ShimuraDatum& d = *doc.datum;
  const std::set<EmbeddingId> t = parse_stratum_tokens(d, stratum_text);
  const StratumDescriptor desc = describe_stratum(d, t);
  for (std::size_t i = 0; i < desc.cycles.size(); ++i) {
    std::cout << "C" << (i + 1) << " = ";
    for (std::size_t j = 0; j < desc.cycles[i].size(); ++j)
      std::cout << (j ? "," : "") << format_embedding(d, desc.cycles[i][j]);
    std::cout << "\n";
  }
  std::cout << "T' = " << format_stratum_set(d, desc.t_prime) << "\n";
  std::cout << "T'0 = " << format_stratum_set(d, desc.t_prime_zero) << "\n";
  std::cout << "T'2 = " << format_stratum_set(d, desc.t_prime_two) << "\n";
  std::cout << "I_T = " << format_stratum_set(d, desc.padding) << "\n";
  std::cout << "Delta(T) = " << format_stratum_set(d, desc.delta) << "\n";
  for (int sig = 0; sig <= 2; ++sig) {
    std::set<EmbeddingId> slots;
    for (int b = 0; b < desc.induced->block_count(); ++b)
      for (int s = 1; s <= desc.induced->block(b).f; ++s)
        if (desc.induced->signature(EmbeddingId{b, s}) == sig) slots.insert(EmbeddingId{b, s});
    std::cout << "Sigma'" << sig << " = " << format_stratum_set(d, slots) << "\n";
  }
  return 0;
}

int run_certify(const InputDocument& doc, const std::string& out_path) {
  CertificatePtr cert;
  try {
    cert = build_certificate(doc.datum, doc.weights);
  } catch (const domain_error& e) {
    std::cerr << "certify failed: " << e.what() << "\n";
    return 1;
  }
  const VerifyReport report = verify_certificate(cert);
  if (!report.ok) {
    for (const std::string& why : report.failures) std::cerr << "FAIL " << why << "\n";
    std::cerr << "certify failed: self-verification rejected the certificate\n";
    return 1;
  }
  const std::string text = serialize_certificate(cert);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream file(out_path);
    if (!file) throw input_error("cannot open output file '" + out_path + "'");
    file << text << "\n";
    if (!file) throw input_error("failed writing certificate to '" + out_path + "'");
  }
  std::cerr << "certificate: " << certificate_entry_count(cert) << " entries, verified\n";
  return 0;
}

int run_verify(const std::string& cert_path) {
  std::ifstream file(cert_path);
  if (!file) throw input_error("cannot open certificate file '" + cert_path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  const CertificatePtr cert = parse_certificate_text(buffer.str());
  const VerifyReport report = verify_certificate(cert);
  for (const std::string& why : report.failures) std::cout << "FAIL " << why << "\n";
  std::cout << "verify: " << (report.ok ? "PASS" : "FAIL") << " ("
            << certificate_entry_count(cert) << " entries)\n";
  return report.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact nefness/ampleness checks and certificates for automorphic line bundles"};
  app.require_subcommand(1);
  std::string input_path;
  app.add_option("--input", input_path, "input document (JSON); standard input when omitted");

  bool want_ample = false;
  bool want_nef = false;
  CLI::App* cmd_check = app.add_subcommand("check", "evaluate the cone inequalities");
  CLI::Option* opt_ample = cmd_check->add_flag("--ample", want_ample, "strict check (default)");
  CLI::Option* opt_nef = cmd_check->add_flag("--nef", want_nef, "non-strict check");
  opt_ample->excludes(opt_nef);
  opt_nef->excludes(opt_ample);

  std::string matrix_block;
  CLI::App* cmd_matrix = app.add_subcommand("matrix", "print H and its closed-form inverse");
  cmd_matrix->add_option("--block", matrix_block, "block name")->required();

  std::string lambda_block;
  CLI::App* cmd_lambda = app.add_subcommand("lambda", "print lambda = H^-1 t for one block");
  cmd_lambda->add_option("--block", lambda_block, "block name")->required();

  int max_size = 2;
  CLI::App* cmd_strata = app.add_subcommand("strata", "enumerate and classify stratum subsets");
  cmd_strata->add_option("--max-size", max_size, "largest subset size listed (default 2)");

  std::string stratum_text;
  CLI::App* cmd_induce = app.add_subcommand("induce", "print the induced datum of one stratum");
  cmd_induce->add_option("--stratum", stratum_text, "comma-separated slot tokens, e.g. p1.2,p1.7")
      ->required();

  std::string out_path;
  CLI::App* cmd_certify = app.add_subcommand("certify", "build, self-verify, and emit a certificate");
  cmd_certify->add_option("--out", out_path, "certificate file; standard output when omitted");

  std::string cert_path;
  CLI::App* cmd_verify = app.add_subcommand("verify", "re-check a stored certificate");
  cmd_verify->add_option("--cert", cert_path, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(cmd_check)) return run_check(load_input(input_path), want_nef);
    if (app.got_subcommand(cmd_matrix)) return run_matrix(load_input(input_path), matrix_block);
    if (app.got_subcommand(cmd_lambda)) return run_lambda(load_input(input_path), lambda_block);
    if (app.got_subcommand(cmd_strata)) return run_strata(load_input(input_path), max_size);
    if (app.got_subcommand(cmd_induce)) return run_induce(load_input(input_path), stratum_text);
    if (app.got_subcommand(cmd_certify)) return run_certify(load_input(input_path), out_path);
    if (app.got_subcommand(cmd_verify)) return run_verify(cert_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
