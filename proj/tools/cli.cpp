#include "lcc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lcc/errors.hpp"
#include "lcc/forster.hpp"
#include "lcc/generators.hpp"
#include "lcc/io.hpp"
#include "lcc/pipeline.hpp"
#include "lcc/spectral.hpp"

namespace lcc {

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
};

void flatten(const Json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else if (j.is_string()) {
    os << prefix << ": " << j.get<std::string>() << "\n";
  } else {
    os << prefix << ": " << j.dump() << "\n";
  }
}

Json verification_json(const VerificationReport& r) {
  Json j;
  j["valid"] = r.valid;
  j["required_size"] = r.required_size;
  std::size_t lo = 0, hi = 0;
  if (!r.matching_sizes.empty()) {
    lo = *std::min_element(r.matching_sizes.begin(), r.matching_sizes.end());
    hi = *std::max_element(r.matching_sizes.begin(), r.matching_sizes.end());
  }
  j["min_matching"] = lo;
  j["max_matching"] = hi;
  Json counts;
  for (auto k : {VerificationIssue::Kind::Size, VerificationIssue::Kind::Disjoint,
                 VerificationIssue::Kind::OwnerInTriple, VerificationIssue::Kind::Span}) {
    counts[to_string(k)] = r.count(k);
  }
  j["issue_counts"] = counts;
  Json issues = Json::array();
  for (std::size_t i = 0; i < r.issues.size() && i < 20; ++i) {
    const auto& is = r.issues[i];
    issues.push_back({{"kind", to_string(is.kind)}, {"element", is.element + 1}, {"item", is.item + 1},
                      {"detail", is.detail}});
  }
  j["issues"] = issues;
  return j;
}

Json instance_json(const LccInstance& inst) {
  Json j;
  j["field"] = inst.vectors.field().name();
  j["n"] = inst.size();
  j["d"] = inst.dim();
  j["delta"] = inst.delta;
  j["rank"] = rank(inst.vectors);
  j["min_matching"] = min_matching_size(inst);
  return j;
}

Json profile_json(const MultiplicityProfile& p) {
  Json j;
  j["distinct_triples"] = p.counts.size();
  j["incidences"] = p.incidences;
  j["max_multiplicity"] = p.max_multiplicity;
  Json h = Json::array();
  for (const auto& [m, c] : p.histogram) h.push_back(Json::array({m, c}));
  j["histogram"] = h;
  return j;
}

Json family_json(const ClusterFamily& f) {
  Json sizes = Json::array();
  for (const auto& s : f.sets) sizes.push_back(s.size());
  Json j;
  j["sets"] = f.sets.size();
  j["set_sizes"] = sizes;
  j["associated_pairs"] = f.pair_assoc.size();
  return j;
}

Json reduction_json(const ReductionResult& r) {
  Json j;
  j["reduced"] = r.reduced;
  j["emptied"] = r.emptied;
  if (r.reduced) {
    j["kept"] = r.kept.size();
    j["instance"] = instance_json(r.instance);
    j["profile_after"] = profile_json(triple_multiplicity(r.instance));
  } else {
    j["witness"] = index_list(r.witness);
    j["witness_dim"] = r.witness_dim;
  }
  if (r.ldc) j["ldc"] = ldc_json(*r.ldc);
  j["detail"] = r.diag;
  return j;
}

void emit(const Json& report, const Globals& g, std::ostream& out) {
  const std::string text = g.format == "text" ? render_text(report) : report.dump(2) + "\n";
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + g.out + " for writing");
  f << text;
}

Json envelope(const std::string& command, const Globals& g, Json params) {
  Json j;
  j["command"] = command;
  j["format_version"] = 1;
  j["seed"] = g.seed;
  j["params"] = std::move(params);
  return j;
}

void require_real(const LccInstance& inst, const std::string& command) {
  if (inst.vectors.field().kind != FieldKind::Real) {
    throw PreconditionError(command + " needs a real instance");
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream os;
  flatten(report, "", os);
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric locally correctable code toolkit"};
  app.name("lcc");
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Root seed")->capture_default_str();
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--out", g.out, "Write the primary output to this file");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string kind = "hadamard";
  int k = 5;
  std::size_t n = 120, d = 3, d_base = 3, m = 4;
  double delta = 0.3, radius = 0.05;
  std::string family_out;
  gen->add_option("--kind", kind)->check(CLI::IsMember({"hadamard", "low-dim", "planted"}))->capture_default_str();
  gen->add_option("--k", k, "Hadamard dimension")->capture_default_str();
  gen->add_option("--n", n)->capture_default_str();
  gen->add_option("--d", d, "Ambient dimension")->capture_default_str();
  gen->add_option("--d-base", d_base)->capture_default_str();
  gen->add_option("--m", m, "Number of planted clusters")->capture_default_str();
  gen->add_option("--delta", delta)->capture_default_str();
  gen->add_option("--radius", radius)->capture_default_str();
  gen->add_option("--family-out", family_out, "Write the cluster family (hadamard, planted)");

  // commands reading an instance
  std::string input;
  auto add_input = [&](CLI::App* sub) { sub->add_option("instance", input, "LCCv1 instance file")->required(); };
  auto* verify = app.add_subcommand("verify", "Verify an instance");
  add_input(verify);

  auto* spread = app.add_subcommand("spread", "Reduce to well-spread position");
  add_input(spread);
  double beta = 0.005;
  std::size_t samples = 2000;
  std::string instance_out;
  spread->add_option("--beta", beta)->capture_default_str();
  spread->add_option("--samples", samples)->capture_default_str();
  spread->add_option("--instance-out", instance_out);

  auto* barthe = app.add_subcommand("barthe", "Isotropic transform with uniform weights");
  add_input(barthe);
  double tol = 1e-9;
  std::size_t max_iter = 20000;
  barthe->add_option("--tol", tol)->capture_default_str();
  barthe->add_option("--max-iter", max_iter)->capture_default_str();

  auto* reduce = app.add_subcommand("reduce", "Regular form and low-multiplicity reduction");
  add_input(reduce);
  std::string mode = "both";
  reduce->add_option("--beta", beta)->capture_default_str();
  reduce->add_option("--mode", mode)->check(CLI::IsMember({"regular", "multiplicity", "both"}))->capture_default_str();
  reduce->add_option("--instance-out", instance_out);

  auto* cluster = app.add_subcommand("cluster", "Final clustering");
  add_input(cluster);
  double lambda = 0.02;
  ClusterParams cp;
  cluster->add_option("--beta", beta)->capture_default_str();
  cluster->add_option("--lambda", lambda)->capture_default_str();
  cluster->add_option("--samples", samples)->capture_default_str();
  cluster->add_option("--corr-cut", cp.corr_cut)->capture_default_str();
  cluster->add_option("--type-a", cp.type_a)->capture_default_str();
  cluster->add_option("--type-b-corr", cp.type_b_corr)->capture_default_str();
  cluster->add_option("--ball-scale", cp.ball_scale)->capture_default_str();
  cluster->add_option("--family-out", family_out);
  cluster->add_option("--instance-out", instance_out);

  auto* restrict_cmd = app.add_subcommand("restrict", "Random restriction with certification");
  add_input(restrict_cmd);
  std::string family_in;
  std::size_t rounds = 0, restarts = 16;
  restrict_cmd->add_option("--family", family_in, "Cluster family file")->required();
  restrict_cmd->add_option("--lambda", lambda)->capture_default_str();
  restrict_cmd->add_option("--rounds", rounds, "0 selects ceil(n^{4 lambda})")->capture_default_str();
  restrict_cmd->add_option("--restarts", restarts)->capture_default_str();

  auto* certify = app.add_subcommand("certify", "Dimension decomposition by amplification");
  add_input(certify);
  certify->add_option("--lambda", lambda)->capture_default_str();
  certify->add_option("--corr-cut", cp.corr_cut)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }

  try {
    if (gen->parsed()) {
      Rng rng = make_rng(stage_seed(g.seed, "gen"));
      LccInstance inst;
      std::optional<ClusterFamily> family;
      if (kind == "hadamard") {
        inst = gen_hadamard_f2(k);
        family = hadamard_family(inst);
      } else if (kind == "low-dim") {
        inst = gen_low_dim_real(n, d_base, d, delta, rng);
      } else {
        PlantedInstance p = gen_planted_clusters(n, d, m, delta, radius, rng);
        inst = std::move(p.instance);
        family = std::move(p.truth);
      }
      if (!family_out.empty()) {
        if (!family) throw PreconditionError("this generator has no cluster family");
        write_family_file(family_out, *family);
      }
      if (g.out.empty()) {
        write_instance(out, inst);
      } else {
        write_instance_file(g.out, inst);
      }
      return kExitOk;
    }

    const LccInstance inst = read_instance_file(input);
    if (verify->parsed()) {
      Json r = envelope("verify", g, Json::object());
      r["instance"] = instance_json(inst);
      r["verification"] = verification_json(verify_lcc(inst));
      r["multiplicity"] = profile_json(triple_multiplicity(inst));
      emit(r, g, out);
    } else if (spread->parsed()) {
      require_real(inst, "spread");
      Rng rng = make_rng(stage_seed(g.seed, "spread"));
      const WellSpreadResult ws = well_spread_transform(inst, beta, samples, rng);
      Json r = envelope("spread", g, {{"beta", beta}, {"samples", samples}});
      r["instance"] = instance_json(inst);
      Json res;
      res["transformed"] = ws.transformed;
      res["qualifying"] = ws.verdict.qualifying;
      res["low_confidence"] = ws.verdict.low_confidence;
      if (ws.transformed) {
        res["status"] = to_string(ws.solution.status);
        res["iterations"] = ws.solution.iterations;
        res["residual"] = ws.solution.residual;
        res["kept"] = ws.kept.size();
        res["refined"] = ws.refined;
        res["mixed"] = ws.mixed;
        res["lambda_max"] = ws.lambda_max;
        res["certified_bound"] = ws.certified_bound;
        res["spread_guarantee"] = ws.spread_guarantee;
        res["output"] = instance_json(ws.instance);
        if (!instance_out.empty()) write_instance_file(instance_out, ws.instance);
      } else {
        res["witness"] = index_list(ws.witness);
        res["witness_dim"] = ws.witness_dim;
      }
      r["result"] = res;
      emit(r, g, out);
    } else if (barthe->parsed()) {
      require_real(inst, "barthe");
      const VectorList u = intrinsic_coordinates(inst.vectors);
      const double r_dim = static_cast<double>(u.dim());
      std::vector<double> gamma(inst.size(), r_dim / static_cast<double>(inst.size()));
      const BartheSolution s = barthe_transform(u, gamma, tol, max_iter);
      const Eigen::MatrixXd img = normalized_images(u.to_eigen(), s.transform);
      const Eigen::MatrixXd frame = img.transpose() * img;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(frame);
      const double lmax = frame.size() == 0 ? 0.0 : es.eigenvalues().maxCoeff();
      const double target = static_cast<double>(inst.size()) / r_dim;
      Json r = envelope("barthe", g, {{"tol", tol}, {"max_iter", max_iter}});
      r["instance"] = instance_json(inst);
      r["result"] = {{"status", to_string(s.status)},
                     {"iterations", s.iterations},
                     {"residual", s.residual},
                     {"gradient_inf", s.gradient_inf},
                     {"lambda_max", lmax},
                     {"isotropic_target", target},
                     {"within_target", lmax <= target * (1.0 + 1e-3)}};
      emit(r, g, out);
    } else if (reduce->parsed()) {
      Json r = envelope("reduce", g, {{"beta", beta}, {"mode", mode}});
      r["instance"] = instance_json(inst);
      r["profile_before"] = profile_json(triple_multiplicity(inst));
      std::optional<LccInstance> current = inst;
      if (mode == "regular" || mode == "both") {
        ReductionResult rr = regularize(*current);
        r["regularize"] = reduction_json(rr);
        current = rr.reduced && !rr.emptied ? std::optional<LccInstance>(rr.instance) : std::nullopt;
      }
      if (current && (mode == "multiplicity" || mode == "both")) {
        ReductionResult rm = reduce_multiplicity(*current, beta);
        r["multiplicity"] = reduction_json(rm);
        current = rm.reduced && !rm.emptied ? std::optional<LccInstance>(rm.instance) : std::nullopt;
      }
      if (current && !instance_out.empty()) write_instance_file(instance_out, *current);
      emit(r, g, out);
    } else if (cluster->parsed()) {
      require_real(inst, "cluster");
      Rng rng = make_rng(stage_seed(g.seed, "cluster"));
      const FinalCluster fc = final_cluster(inst, beta, lambda, rng, cp, 0.0, samples);
      Json r = envelope("cluster", g,
                        {{"beta", beta},
                         {"lambda", lambda},
                         {"samples", samples},
                         {"corr_cut", cp.corr_cut},
                         {"type_a", cp.type_a},
                         {"type_b_corr", cp.type_b_corr},
                         {"ball_radius", cp.ball_radius * cp.ball_scale}});
      r["instance"] = instance_json(inst);
      Json res;
      res["outcome"] = to_string(fc.outcome);
      if (fc.outcome == FinalCluster::Outcome::Clustered) {
        std::size_t total = 0, clustered = 0;
        for (const auto& mt : fc.instance.matchings) {
          for (const Triple& t : mt.triples) {
            ++total;
            clustered += is_clustered(t, fc.family) ? 1 : 0;
          }
        }
        res["retained"] = fc.positions.size();
        res["positions"] = index_list(fc.positions);
        res["family"] = family_json(fc.family);
        res["triples"] = total;
        res["clustered_triples"] = clustered;
        res["output"] = instance_json(fc.instance);
        if (!family_out.empty()) write_family_file(family_out, fc.family);
        if (!instance_out.empty()) write_instance_file(instance_out, fc.instance);
      } else if (fc.outcome == FinalCluster::Outcome::LowDimWitness) {
        res["witness"] = index_list(fc.witness);
        res["witness_dim"] = fc.witness_dim;
        Json l = Json::array();
        for (const auto& e : fc.ldcs) l.push_back(ldc_json(e));
        res["ldcs"] = l;
      }
      res["detail"] = fc.diag;
      r["result"] = res;
      emit(r, g, out);
    } else if (restrict_cmd->parsed()) {
      const ClusterFamily fam0 = read_family_file(family_in);
      ClusterFamily fam = fam0;
      associate_pairs(fam, inst);
      const std::size_t r_rounds = rounds > 0 ? rounds : default_rounds(lambda, inst.size());
      const RestrictionTranscript tr =
          best_restriction(inst, fam, lambda, r_rounds, restarts, stage_seed(g.seed, "restrict"));
      const DimensionCertificate cert = certify_dimension(inst, tr);
      Json r = envelope("restrict", g, {{"lambda", lambda}, {"rounds", r_rounds}, {"restarts", restarts}});
      r["instance"] = instance_json(inst);
      r["family"] = family_json(fam);
      r["transcript"] = transcript_json(tr);
      r["certificate"] = certificate_json(cert);
      emit(r, g, out);
    } else if (certify->parsed()) {
      const BoundReport rep = certify_bound(inst, lambda, stage_seed(g.seed, "certify"), cp);
      Json r = envelope("certify", g, {{"lambda", lambda}, {"corr_cut", cp.corr_cut}});
      r["instance"] = instance_json(inst);
      r["result"] = bound_json(rep);
      emit(r, g, out);
    }
    return kExitOk;
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const CertificationError& e) {
    err << "certification failure: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const StructuralError& e) {
    err << "malformed instance: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace lcc
