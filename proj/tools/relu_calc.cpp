// Command-line surface: build the explicit approximator networks with their
// bound reports, and verify networks against targets (grid error, exact
// line traces, piece counts, incapacity certificates, growth bound).
//
// Exit codes: 0 all checks pass, 1 bound or certificate failure, 2 usage.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relucalc/relucalc.hpp"

namespace {

using namespace relucalc;

constexpr int kExitPass = 0;
constexpr int kExitBoundFailure = 1;
constexpr int kExitUsage = 2;

struct OutputPaths {
  std::string net;
  std::string report;
  std::string csv;
};

json doubles_json(const std::vector<double>& v) { return json(v); }

void emit_report(const OutputPaths& out, const json& report, const std::string& csv) {
  if (!out.report.empty()) write_file_atomic(out.report, report.dump(2) + "\n");
  if (!out.csv.empty()) write_file_atomic(out.csv, csv);
}

// ---- build ---------------------------------------------------------------

int finish_build(const Construction& built, const json& params, const OutputPaths& out) {
  if (!out.net.empty()) save_network(built.net, out.net);
  json report = report_to_json(built.report);
  report["inputs"] = params;
  report["metrics"] = metrics_to_json(metrics(built.net));
  emit_report(out, report, report_to_csv(built.report));
  std::cout << report.dump(2) << "\n";
  if (const BoundClaim* bad = built.report.failing()) {
    std::cerr << "bound failed: " << bad->name << " (" << bad->formula << ")\n";
    return kExitBoundFailure;
  }
  return kExitPass;
}

// ---- verify helpers ------------------------------------------------------

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  return values;
}

// "p1,..,pd:q1,..,qd"; a flat list without ':' splits in half.
void parse_segment(const std::string& text, std::vector<double>& p, std::vector<double>& q) {
  const size_t colon = text.find(':');
  if (colon != std::string::npos) {
    p = parse_number_list(text.substr(0, colon));
    q = parse_number_list(text.substr(colon + 1));
  } else {
    const std::vector<double> flat = parse_number_list(text);
    if (flat.size() % 2 != 0) throw domain_error("segment: need an even number of coordinates");
    p.assign(flat.begin(), flat.begin() + flat.size() / 2);
    q.assign(flat.begin() + flat.size() / 2, flat.end());
  }
  if (p.size() != q.size() || p.empty()) throw domain_error("segment: endpoint sizes differ");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ReLU network calculus: constructive approximators with certified bounds"};
  app.require_subcommand(1);

  // Shared flag storage.
  TargetSpec spec;
  double eps = 0.25;
  int64_t N = 1, n = 1;
  double R = 0.0, B = 1.0;
  bool downsize = false;
  OutputPaths out;
  std::string net_path, target_name = "product", segment;
  int64_t samples = 100000;
  uint64_t seed = 0;
  std::optional<double> bump_delta;
  std::optional<double> eps_check;

  CLI::App* build = app.add_subcommand("build", "construct a network and its bound report");
  build->require_subcommand(1);
  const auto add_target_flags = [&](CLI::App* cmd, bool with_kappa) {
    cmd->add_option("--d", spec.d, "input dimension");
    cmd->add_option("--eps", eps, "target sup error");
    cmd->add_option("--a", spec.a, "box lower endpoint");
    cmd->add_option("--b", spec.b, "box upper endpoint");
    cmd->add_option("--gamma", spec.gamma, "inner scaling in (0,1] (sums: any positive)");
    cmd->add_option("--beta", spec.beta, "per-factor scaling >= 1");
    if (with_kappa) {
      cmd->add_option("--kappa", spec.kappa, "amplitude");
      cmd->add_option("--phi", spec.phi, "phase");
    }
  };
  const auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out", out.net, "network file path");
    cmd->add_option("--report", out.report, "JSON report path");
    cmd->add_option("--csv", out.csv, "CSV report path");
  };

  CLI::App* b_product = build->add_subcommand("product", "gamma*beta^d * product of inputs");
  add_target_flags(b_product, false);
  b_product->add_option("--downsize", downsize, "quarter the size norm to <= 1");
  add_output_flags(b_product);

  CLI::App* b_sinprod = build->add_subcommand("sin-product", "kappa*sin(gamma*beta^d*prod + phi)");
  add_target_flags(b_sinprod, true);
  add_output_flags(b_sinprod);

  CLI::App* b_sinsum = build->add_subcommand("sin-sum", "kappa*sin(gamma*2^d*sum + phi)");
  add_target_flags(b_sinsum, true);
  add_output_flags(b_sinsum);

  CLI::App* b_square = build->add_subcommand("square", "x^2 approximator");
  b_square->add_option("--N", N, "dyadic refinement depth")->check(CLI::Range(int64_t(1), int64_t(40)));
  b_square->add_option("--R", R, "half-width of the box (omit for [0,1])");
  add_output_flags(b_square);

  CLI::App* b_saw = build->add_subcommand("sawtooth", "triangle wave at frequency 2^(n+1)/B");
  b_saw->add_option("--B", B, "window half-width")->check(CLI::PositiveNumber);
  b_saw->add_option("--n", n, "doubling depth")->check(CLI::NonNegativeNumber);
  add_output_flags(b_saw);

  CLI::App* b_per = build->add_subcommand("periodic", "sin(x + phi) on [-2^n pi, 2^n pi]");
  b_per->add_option("--n", n, "window exponent")->check(CLI::Range(int64_t(1), int64_t(40)));
  b_per->add_option("--N", N, "number of interpolation hats (default from eps)");
  b_per->add_option("--eps", eps, "target sup error");
  b_per->add_option("--phi", spec.phi, "phase");
  add_output_flags(b_per);

  CLI::App* verify = app.add_subcommand("verify", "check a stored network");
  verify->require_subcommand(1);
  const auto add_net_flag = [&](CLI::App* cmd) {
    cmd->add_option("--net", net_path, "network file")->required();
  };
  const auto add_verify_target = [&](CLI::App* cmd) {
    cmd->add_option("--target", target_name, "product|sin-product|sin-sum|periodic|identity");
    add_target_flags(cmd, true);
    cmd->add_option("--bump-delta", bump_delta, "smooth localization margin");
  };

  CLI::App* v_error = verify->add_subcommand("error", "max |realize - target| on the box");
  add_net_flag(v_error);
  add_verify_target(v_error);
  v_error->add_option("--samples", samples, "sample count");
  v_error->add_option("--seed", seed, "sampling seed");
  v_error->add_option("--check-eps", eps_check, "fail when the error exceeds this");
  add_output_flags(v_error);

  CLI::App* v_trace = verify->add_subcommand("trace", "exact affine pieces along a segment");
  add_net_flag(v_trace);
  v_trace->add_option("--segment", segment, "p:q, comma-separated coordinates")->required();
  add_output_flags(v_trace);

  CLI::App* v_pieces = verify->add_subcommand("pieces", "count affine pieces along a segment");
  add_net_flag(v_pieces);
  v_pieces->add_option("--segment", segment, "p:q, comma-separated coordinates")->required();
  add_output_flags(v_pieces);

  CLI::App* v_cert = verify->add_subcommand("certify", "shallow incapacity certificate");
  add_net_flag(v_cert);
  add_verify_target(v_cert);  // --eps is the accuracy the network claims
  add_output_flags(v_cert);

  CLI::App* v_growth = verify->add_subcommand("growth", "sampled sup against the growth bound");
  add_net_flag(v_growth);
  v_growth->add_option("--a", spec.a, "box lower endpoint");
  v_growth->add_option("--b", spec.b, "box upper endpoint");
  v_growth->add_option("--samples", samples, "sample count");
  v_growth->add_option("--seed", seed, "sampling seed");
  add_output_flags(v_growth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    json params;
    params["seed"] = seed;

    if (b_product->parsed()) {
      spec.family = TargetFamily::product;
      spec.validate();
      const double Rbox = std::max({2.0, std::abs(spec.a), std::abs(spec.b)});
      Construction built = downsize
                               ? downsized_product_net(spec.d, eps, spec.a, spec.b, spec.gamma, spec.beta)
                               : dprod_net(spec.d, eps, Rbox, spec.gamma, spec.beta);
      params["family"] = "product";
      params["d"] = spec.d;
      params["eps"] = eps;
      params["a"] = spec.a;
      params["b"] = spec.b;
      params["gamma"] = spec.gamma;
      params["beta"] = spec.beta;
      return finish_build(built, params, out);
    }
    if (b_sinprod->parsed() || b_sinsum->parsed()) {
      spec.family = b_sinprod->parsed() ? TargetFamily::sin_product : TargetFamily::sin_sum;
      Construction built = b_sinprod->parsed() ? sin_of_product_net(spec, eps) : sin_of_sum_net(spec, eps);
      params["family"] = to_string(spec.family);
      params["d"] = spec.d;
      params["eps"] = eps;
      params["a"] = spec.a;
      params["b"] = spec.b;
      params["gamma"] = spec.gamma;
      params["beta"] = spec.beta;
      params["kappa"] = spec.kappa;
      params["phi"] = spec.phi;
      return finish_build(built, params, out);
    }
    if (b_square->parsed()) {
      Construction built = (R > 0.0) ? square_net(N, R) : square_net_base(N);
      params["family"] = "square";
      params["N"] = N;
      if (R > 0.0) params["R"] = R;
      return finish_build(built, params, out);
    }
    if (b_saw->parsed()) {
      Construction built = sawtooth_net(B, n);
      params["family"] = "sawtooth";
      params["B"] = B;
      params["n"] = n;
      return finish_build(built, params, out);
    }
    if (b_per->parsed()) {
      const double phi = spec.phi;
      if (!b_per->count("--N")) N = int64_t(std::ceil(2.0 * std::numbers::pi / eps)) - 1;
      Construction built =
          periodic_lipschitz_net([phi](double t) { return std::sin(t + phi); }, n, N, 1.0, eps);
      params["family"] = "periodic";
      params["n"] = n;
      params["N"] = N;
      params["eps"] = eps;
      params["phi"] = phi;
      return finish_build(built, params, out);
    }

    // verify subcommands
    const Network net = load_network(net_path);
    if (v_error->parsed()) {
      TargetFunction target;
      if (target_name == "product") spec.family = TargetFamily::product;
      else if (target_name == "sin-product") spec.family = TargetFamily::sin_product;
      else if (target_name == "sin-sum") spec.family = TargetFamily::sin_sum;
      else if (target_name == "periodic") spec.family = TargetFamily::periodic_generic;
      else if (target_name == "identity") spec.family = TargetFamily::identity;
      else throw domain_error("unknown target family: " + target_name);
      spec.d = net.in_dim();
      target.spec = spec;
      target.bump_delta = bump_delta;
      const double measured = max_error_on_box(net, target, spec.a, spec.b, samples, seed);
      json report;
      report["op"] = "error";
      report["target"] = to_string(spec.family);
      report["samples"] = samples;
      report["seed"] = seed;
      report["max_error"] = measured;
      std::ostringstream csv;
      csv << "op,target,samples,seed,max_error\n"
          << "error," << to_string(spec.family) << ',' << samples << ',' << seed << ','
          << json(measured).dump() << '\n';
      emit_report(out, report, csv.str());
      std::cout << report.dump(2) << "\n";
      if (eps_check && measured > *eps_check) return kExitBoundFailure;
      return kExitPass;
    }
    if (v_trace->parsed() || v_pieces->parsed()) {
      std::vector<double> p, q;
      parse_segment(segment, p, q);
      const PwlTrace trace = exact_line_trace(net, p, q);
      json report;
      report["op"] = v_trace->parsed() ? "trace" : "pieces";
      report["pieces"] = count_pieces(trace);
      if (v_trace->parsed()) {
        report["breakpoints"] = doubles_json(trace.breakpoints);
        report["slopes"] = doubles_json(trace.slopes);
        report["intercepts"] = doubles_json(trace.intercepts);
      }
      std::ostringstream csv;
      csv << "piece,t_lo,t_hi,slope,intercept\n";
      for (size_t i = 0; i < trace.slopes.size(); ++i)
        csv << i << ',' << json(trace.breakpoints[i]).dump() << ','
            << json(trace.breakpoints[i + 1]).dump() << ',' << json(trace.slopes[i]).dump() << ','
            << json(trace.intercepts[i]).dump() << '\n';
      emit_report(out, report, csv.str());
      std::cout << report.dump(2) << "\n";
      return kExitPass;
    }
    if (v_cert->parsed()) {
      if (target_name == "sin-product") spec.family = TargetFamily::sin_product;
      else if (target_name == "sin-sum") spec.family = TargetFamily::sin_sum;
      else throw domain_error("certify: target must be sin-product or sin-sum");
      const WitnessSequence ws = (spec.family == TargetFamily::sin_product)
                                     ? oscillation_witnesses_product(spec)
                                     : oscillation_witnesses_sum(spec);
      const IncapacityCertificate cert = shallow_incapacity_certificate(net, ws, eps);
      json report;
      report["op"] = "certify";
      report["pieces"] = cert.pieces;
      report["needed"] = cert.needed;
      report["incapable"] = cert.incapable;
      if (cert.violating_point) {
        report["violating_point"] = doubles_json(*cert.violating_point);
        report["error_at_point"] = *cert.error_at_point;
      }
      std::ostringstream csv;
      csv << "op,pieces,needed,incapable,error_at_point\n"
          << "certify," << cert.pieces << ',' << cert.needed << ','
          << (cert.incapable ? "true" : "false") << ','
          << (cert.error_at_point ? json(*cert.error_at_point).dump() : "") << '\n';
      emit_report(out, report, csv.str());
      std::cout << report.dump(2) << "\n";
      return cert.incapable ? kExitBoundFailure : kExitPass;
    }
    if (v_growth->parsed()) {
      const GrowthCheck check = growth_bound_check(net, spec.a, spec.b, samples, seed);
      json report;
      report["op"] = "growth";
      report["measured_sup"] = check.measured;
      report["bound"] = check.bound;
      report["pass"] = check.pass;
      std::ostringstream csv;
      csv << "op,measured_sup,bound,pass\n"
          << "growth," << json(check.measured).dump() << ',' << json(check.bound).dump() << ','
          << (check.pass ? "pass" : "fail") << '\n';
      emit_report(out, report, csv.str());
      std::cout << report.dump(2) << "\n";
      return check.pass ? kExitPass : kExitBoundFailure;
    }
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const contract_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBoundFailure;
  }
  return kExitUsage;
}
