// pdq: build and check pairwise disjoint Steiner quadruple systems.
//
// Exit codes: 0 everything passed, 1 a property failed, 2 bad usage or input.

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pdq/pdq.hpp"

namespace fs = std::filesystem;
using namespace pdq;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string system_file_name(std::size_t k, std::size_t total)
{
  std::ostringstream name;
  name << "system_" << std::setw(total > 99 ? 3 : 2) << std::setfill('0') << k << ".sqs";
  return name.str();
}

void save_collection(const PdqCollection& c, const fs::path& dir)
{
  fs::create_directories(dir);
  for (std::size_t k = 0; k < c.size(); ++k) save_system(c.systems()[k], dir / system_file_name(k, c.size()));
}

int emit(const Certificate& cert)
{
  std::cout << cert.to_text();
  return cert.passed() ? kPass : kFail;
}

/// One certificate gathering the results of several, names prefixed.
Certificate merge(std::string subject, std::size_t order, const std::vector<std::pair<std::string, Certificate>>& parts)
{
  Certificate out(std::move(subject), order);
  for (const auto& [prefix, c] : parts) {
    for (const auto& [k, v] : c.counts()) out.count(prefix + "." + k, v);
    for (auto r : c.results()) {
      r.name = prefix + "." + r.name;
      out.record(std::move(r));
    }
    for (const auto& n : c.notes()) out.note(prefix + ": " + n);
  }
  return out;
}

struct Options {
  int n = 0;
  std::string out;
  std::string outdir;
  std::string kind;
  std::string base;
  bool checkIntercalates = false;
  std::vector<std::string> files;
  std::vector<std::string> extras;
  std::string f, fprime, rect;
  std::optional<std::size_t> k;
  std::uint64_t witnessBudget = 400000;
  std::uint64_t seed = 1;
  std::uint64_t nodeLimit = 50'000'000;
  std::size_t v = 0;
};

int run_latin(const Options& o)
{
  const auto m = build_M(o.n);
  save_grid_csv(m, o.out);
  if (o.checkIntercalates) return emit(verify_latin(m, true));
  return kPass;
}

int run_onefact(const Options& o)
{
  const auto f = o.kind == "R" ? build_R(o.n) : build_T(o.n);
  const auto cert = verify_one_factorization(f.as_one_factorization());
  save_factorization(f.as_one_factorization(), o.out, f.labels());
  if (!cert.passed()) return emit(cert);
  return kPass;
}

int run_hsquare(const Options& o)
{
  const auto h = build_H(o.n);
  save_label_csv(h, o.out);
  if (!h.is_latin_over(t_side_labels(o.n))) {
    std::cerr << "constructed square is not Latin over its labels\n";
    return kFail;
  }
  return kPass;
}

int run_dls(const Options& o)
{
  const auto base = load_system(o.base);
  if (base.order() != 2 * static_cast<std::size_t>(o.n))
    throw std::invalid_argument("base order " + std::to_string(base.order()) + " is not 2n = " + std::to_string(2 * o.n));
  const auto out = dls_construct(base, build_M(o.n));
  save_collection(out.systems, o.outdir);
  auto cert = merge("dls", out.systems.order(),
                    {{"pdq", verify_pdq(out.systems)},
                     {"conf13", verify_lemma_conf13(out)},
                     {"conf22", config22_census(out)}});
  cert.set_content(collection_text(out.systems));
  write_file(fs::path(o.outdir) / "certificate.json", cert.to_text());
  return emit(cert);
}

int run_db(const Options& o)
{
  std::vector<QuadSystem> bases;
  for (const auto& b : o.files) bases.push_back(load_system(b));
  const auto f = load_factorization(o.f).factorization;
  const auto fp = load_factorization(o.fprime).factorization;
  const auto rect = load_grid_csv(o.rect);
  const auto out = db_construct(bases, f, fp, rect);
  save_collection(out, o.outdir);
  const auto cert = verify_pdq(out);
  write_file(fs::path(o.outdir) / "certificate.json", cert.to_text());
  return emit(cert);
}

int run_construct(const Options& o)
{
  const auto base = load_system(o.base);
  const std::size_t cap = o.n >= 4 ? 2 * static_cast<std::size_t>(o.n) - 7 : 0;
  if (o.k && *o.k > cap)
    throw std::invalid_argument("k exceeds 2n-7: requested " + std::to_string(*o.k) + " but at most " +
                                std::to_string(cap) + " for n = " + std::to_string(o.n));
  std::vector<QuadSystem> extras;
  for (const auto& e : o.extras) extras.push_back(load_system(e));
  if (o.extras.empty()) {
    const auto want = o.k.value_or(cap);
    auto w = disjoint_witnesses(base, want, o.witnessBudget, o.seed);
    std::cerr << "witness search: " << w.systems.size() << " of " << want << " disjoint SQS(" << base.order()
              << ") after " << w.evaluated << " evaluations\n";
    extras = std::move(w.systems);
  }
  auto result = theorem1_pipeline(o.n, base, extras, o.k);
  save_collection(result.systems, o.outdir);
  if (!o.extras.empty() || !extras.empty()) {
    fs::create_directories(fs::path(o.outdir) / "witnesses");
    for (std::size_t t = 0; t < result.dbCount; ++t)
      save_system(extras[t], fs::path(o.outdir) / "witnesses" / system_file_name(t, result.dbCount));
  }
  write_file(fs::path(o.outdir) / "certificate.json", result.certificate.to_text());
  return emit(result.certificate);
}

int run_verify(const Options& o)
{
  if (o.kind == "pdq") {
    std::vector<QuadSystem> systems;
    for (const auto& f : o.files) systems.push_back(load_system(f));
    if (systems.empty()) throw std::invalid_argument("no systems given");
    const auto v = systems.front().order();
    for (const auto& s : systems)
      if (s.order() != v) throw std::invalid_argument("systems have different orders");
    return emit(verify_pdq(PdqCollection(v, std::move(systems))));
  }
  int status = kPass;
  for (const auto& f : o.files) {
    Certificate cert("none", 0);
    if (o.kind == "sqs") {
      cert = verify_sqs(load_system(f));
    } else if (o.kind == "onefact") {
      cert = verify_one_factorization(load_factorization(f).factorization);
    } else {
      cert = verify_latin(load_grid_csv(f), o.checkIntercalates);
    }
    cert.note("file: " + f);
    status = std::max(status, emit(cert));
  }
  return status;
}

int run_search(const Options& o)
{
  const auto r = search_sqs(o.v, o.seed, o.nodeLimit);
  std::cerr << to_string(r.status) << " after " << r.nodes << " nodes\n";
  if (r.status != SearchStatus::Found) return kFail;
  const auto cert = verify_sqs(*r.system);
  if (!cert.passed()) return emit(cert);
  if (o.out.empty())
    std::cout << system_to_text(*r.system);
  else
    save_system(*r.system, o.out);
  return kPass;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Pairwise disjoint Steiner quadruple systems"};
  app.require_subcommand(1);
  Options o;

  auto* latin = app.add_subcommand("latin", "write M_n as CSV");
  latin->add_option("--n", o.n, "odd order n >= 5")->required();
  latin->add_flag("--check-intercalates", o.checkIntercalates, "certify Latin and intercalate-free on stdout");
  latin->add_option("--out", o.out)->required();

  auto* onefact = app.add_subcommand("onefact", "write the R or T one-factorization of K_2n");
  onefact->add_option("--n", o.n)->required();
  onefact->add_option("--kind", o.kind)->required()->check(CLI::IsMember({"R", "T"}));
  onefact->add_option("--out", o.out)->required();

  auto* hsquare = app.add_subcommand("hsquare", "write the label square H_{2n-1} as CSV");
  hsquare->add_option("--n", o.n)->required();
  hsquare->add_option("--out", o.out)->required();

  auto* dls = app.add_subcommand("dls", "2n disjoint SQS(4n) from an SQS(2n)");
  dls->add_option("--base", o.base)->required()->check(CLI::ExistingFile);
  dls->add_option("--n", o.n)->required();
  dls->add_option("--outdir", o.outdir)->required();

  auto* db = app.add_subcommand("db", "k disjoint SQS(2v) from k disjoint SQS(v)");
  db->add_option("--bases", o.files)->required()->check(CLI::ExistingFile);
  db->add_option("--f", o.f)->required()->check(CLI::ExistingFile);
  db->add_option("--fprime", o.fprime)->required()->check(CLI::ExistingFile);
  db->add_option("--rect", o.rect, "k x (v-1) Latin rectangle CSV")->required()->check(CLI::ExistingFile);
  db->add_option("--outdir", o.outdir)->required();

  auto* construct = app.add_subcommand("construct", "2n + k disjoint SQS(4n)");
  construct->add_option("--n", o.n)->required();
  construct->add_option("--base", o.base)->required()->check(CLI::ExistingFile);
  construct->add_option("--extras", o.extras, "disjoint SQS(2n); searched from --base when omitted")
      ->check(CLI::ExistingFile);
  construct->add_option("--k", o.k, "number of extra systems (at most 2n-7)");
  construct->add_option("--witness-budget", o.witnessBudget, "relabelings tried when searching extras");
  construct->add_option("--seed", o.seed);
  construct->add_option("--outdir", o.outdir)->required();

  auto* verify = app.add_subcommand("verify", "certify files");
  verify->add_option("--kind", o.kind)->required()->check(CLI::IsMember({"sqs", "pdq", "onefact", "latin"}));
  verify->add_flag("--check-intercalates", o.checkIntercalates, "latin: also require no 2x2 subsquares");
  verify->add_option("files", o.files)->required()->check(CLI::ExistingFile);

  auto* search = app.add_subcommand("search", "exact-cover search for an SQS(v)");
  search->add_option("--v", o.v)->required();
  search->add_option("--seed", o.seed);
  search->add_option("--node-limit", o.nodeLimit);
  search->add_option("--out", o.out, "write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kPass : kUsage;
  }

  try {
    if (*latin) return run_latin(o);
    if (*onefact) return run_onefact(o);
    if (*hsquare) return run_hsquare(o);
    if (*dls) return run_dls(o);
    if (*db) return run_db(o);
    if (*construct) return run_construct(o);
    if (*verify) return run_verify(o);
    if (*search) return run_search(o);
  } catch (const CertificationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::cout << e.certificate().to_text();
    return kFail;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
