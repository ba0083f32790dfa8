#include "wattmark/report/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wattmark/format.hpp"

namespace wattmark::report {
namespace {

constexpr int kStatDecimals = 4;
constexpr int kDescriptiveDigits = 6;

std::string stat(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_fixed(v, kStatDecimals);
}

std::string sig(double v) {
  if (std::isnan(v)) return "nan";
  return format_significant(v, kDescriptiveDigits);
}

std::string full(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_roundtrip(v);
}

// "p = 0.1234" or "p < 0.001"
std::string p_is(const char* name, double p) {
  const auto s = format_p(p);
  return std::string(name) + (s.front() == '<' ? " < " + s.substr(1) : " = " + s);
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }
const char* boolean(bool b) { return b ? "true" : "false"; }

// Left-aligned first column, right-aligned numbers.
std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      const auto pad = std::string(width[c] - r[c].size(), ' ');
      if (c > 0) line += "  ";
      line += c == 0 ? r[c] + pad : pad + r[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << "  " << line << '\n';
  }
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string pair_label(const stats::PairwiseResult& r) { return r.a + " vs " + r.b; }

std::string render_text(const std::string& metric, const stats::AnalysisBundle& b,
                        const SummaryTable& summary) {
  std::ostringstream out;
  out << "Metric: " << metric << "  (alpha = " << format_roundtrip(b.alpha)
      << ", subjects = " << b.subjects << ", conditions = " << b.labels.size() << ")\n\n";

  out << "Descriptive statistics\n";
  for (const auto& m : summary.metrics) {
    std::vector<std::vector<std::string>> rows{{m, "n", "mean", "sd", "min", "max"}};
    for (std::size_t c = 0; c < summary.conditions.size(); ++c) {
      const auto& d = summary.at(c, m);
      rows.push_back({summary.conditions[c], std::to_string(d.n), sig(d.mean), sig(d.sd),
                      sig(d.min), sig(d.max)});
    }
    out << table(rows) << '\n';
  }

  out << "Shapiro-Wilk normality\n";
  {
    std::vector<std::vector<std::string>> rows{{"condition", "W", "p", "normal"}};
    for (std::size_t j = 0; j < b.labels.size(); ++j) {
      const auto& n = b.normality[j];
      rows.push_back({b.labels[j], stat(n.w), format_p(n.p), yes_no(n.normal)});
    }
    out << table(rows) << '\n';
  }

  const auto& s = b.sphericity;
  if (s.trivial) {
    out << "Sphericity: satisfied (k=2)\n";
  } else {
    out << "Sphericity (Mauchly): W = " << stat(s.w) << ", chi2(" << s.df
        << ") = " << stat(s.chi_sq) << ", " << p_is("p", s.p) << " -> "
        << (s.satisfied(b.alpha) ? "satisfied" : "violated, Greenhouse-Geisser correction applied")
        << '\n';
  }

  const auto& a = b.anova;
  out << "RM-ANOVA: F(" << a.df_num << ", " << a.df_den << ") = " << stat(a.f)
      << ", " << p_is("p", a.p) << ", eta_g^2 = " << stat(a.eta_g_sq)
      << ", GG epsilon = " << stat(a.gg_epsilon) << ", " << p_is("p_GG", a.p_gg) << '\n';
  out << "Decision: " << (b.reject ? "reject" : "retain") << " H0 at alpha = "
      << format_roundtrip(b.alpha) << " using " << p_is(b.used_gg ? "p_GG" : "p", b.operative_p)
      << "\n\n";

  out << "Pairwise paired t tests (Bonferroni, m = " << b.pairwise.size() << ")\n";
  {
    std::vector<std::vector<std::string>> rows{{"pair", "t", "df", "p_raw", "p_corrected", "reject"}};
    for (const auto& p : b.pairwise) {
      rows.push_back({pair_label(p), stat(p.t), std::to_string(p.df), format_p(p.p_raw),
                      format_p(p.p_corrected), yes_no(p.reject)});
    }
    out << table(rows);
  }
  return out.str();
}

std::string normality_csv(const stats::AnalysisBundle& b) {
  std::ostringstream out;
  out << "condition,w,p,normal\n";
  for (std::size_t j = 0; j < b.labels.size(); ++j) {
    const auto& n = b.normality[j];
    out << b.labels[j] << ',' << full(n.w) << ',' << full(n.p) << ',' << boolean(n.normal) << '\n';
  }
  return out.str();
}

std::string sphericity_csv(const stats::AnalysisBundle& b) {
  const auto& s = b.sphericity;
  std::ostringstream out;
  out << "w,chi_sq,df,p,satisfied,trivial\n"
      << full(s.w) << ',' << full(s.chi_sq) << ',' << s.df << ',' << full(s.p) << ','
      << boolean(s.satisfied(b.alpha)) << ',' << boolean(s.trivial) << '\n';
  return out.str();
}

std::string anova_csv(const stats::AnalysisBundle& b) {
  const auto& a = b.anova;
  std::ostringstream out;
  out << "f,df_num,df_den,p,eta_g_sq,gg_epsilon,p_gg,used_gg,operative_p,reject,"
         "ss_conditions,ss_subjects,ss_error,ss_total\n"
      << full(a.f) << ',' << a.df_num << ',' << a.df_den << ',' << full(a.p) << ','
      << full(a.eta_g_sq) << ',' << full(a.gg_epsilon) << ',' << full(a.p_gg) << ','
      << boolean(b.used_gg) << ',' << full(b.operative_p) << ',' << boolean(b.reject) << ','
      << full(a.ss_conditions) << ',' << full(a.ss_subjects) << ',' << full(a.ss_error) << ','
      << full(a.ss_total) << '\n';
  return out.str();
}

std::string pairwise_csv(const stats::AnalysisBundle& b) {
  std::ostringstream out;
  out << "pair,t,p_raw,p_corrected,reject\n";
  for (const auto& p : b.pairwise) {
    out << pair_label(p) << ',' << full(p.t) << ',' << full(p.p_raw) << ','
        << full(p.p_corrected) << ',' << boolean(p.reject) << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> write_analysis_csvs(const std::filesystem::path& dir,
                                                       const std::string& metric,
                                                       const stats::AnalysisBundle& b) {
  const std::vector<std::pair<std::string, std::string>> files{
      {metric + "_normality.csv", normality_csv(b)},
      {metric + "_sphericity.csv", sphericity_csv(b)},
      {metric + "_anova.csv", anova_csv(b)},
      {metric + "_pairwise.csv", pairwise_csv(b)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    write_file(dir / name, text);
    written.push_back(dir / name);
  }
  return written;
}

std::string plotdata_csv(const SummaryTable& summary, const std::string& metric) {
  std::ostringstream out;
  out << "condition,mean,sd,n\n";
  for (std::size_t c = 0; c < summary.conditions.size(); ++c) {
    const auto& d = summary.at(c, metric);
    out << summary.conditions[c] << ',' << full(d.mean) << ',' << full(d.sd) << ',' << d.n << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> write_plotdata(const std::filesystem::path& dir,
                                                  const SummaryTable& summary) {
  std::vector<std::filesystem::path> written;
  for (const auto& m : summary.metrics) {
    write_file(dir / (m + ".csv"), plotdata_csv(summary, m));
    written.push_back(dir / (m + ".csv"));
  }
  return written;
}

}  // namespace wattmark::report
