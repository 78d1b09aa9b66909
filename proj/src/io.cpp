#include "varta/io.hpp"

#include "varta/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace varta {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", path.empty() ? "<root>" : path));
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(fmt::format("{}: missing required field", path.empty() ? key : path + "." + key));
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(fmt::format("{}: expected a number", path));
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(fmt::format("{}: must be finite", path));
    return v;
}

std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        throw ConfigError(fmt::format("{}: expected a non-negative integer", path));
    }
    return j.get<std::size_t>();
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(fmt::format("{}: expected an array", path));
    return j;
}

Eigen::MatrixXd matrix(const json& j, std::size_t p, const std::string& path) {
    array(j, path);
    if (j.size() != p) throw ConfigError(fmt::format("{}: expected {} rows, got {}", path, p, j.size()));
    Eigen::MatrixXd m(p, p);
    for (std::size_t r = 0; r < p; ++r) {
        const std::string rp = fmt::format("{}[{}]", path, r);
        const json& row = array(j[r], rp);
        if (row.size() != p) throw ConfigError(fmt::format("{}: expected {} columns, got {}", rp, p, row.size()));
        for (std::size_t c = 0; c < p; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(row[c], fmt::format("{}[{}]", rp, c));
        }
    }
    return m;
}

MarginalSpec marginal(const json& j, const std::string& path) {
    const json& fam = field(j, "family", path);
    if (!fam.is_string()) throw ConfigError(fmt::format("{}.family: expected a string", path));
    Family f;
    try {
        f = parse_family(fam.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(fmt::format("{}.family: {}", path, e.what()));
    }
    try {
        switch (f) {
            case Family::Weibull:
                return MarginalSpec::weibull(number(field(j, "shape", path), path + ".shape"),
                                             number(field(j, "scale", path), path + ".scale"));
            case Family::Gaussian:
                return MarginalSpec::gaussian(number(field(j, "mean", path), path + ".mean"),
                                              number(field(j, "sd", path), path + ".sd"));
            case Family::Empirical: {
                const std::string sp = path + ".support";
                const json& s = array(field(j, "support", path), sp);
                std::vector<double> v;
                for (std::size_t i = 0; i < s.size(); ++i) v.push_back(number(s[i], fmt::format("{}[{}]", sp, i)));
                return MarginalSpec::empirical(std::move(v));
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
    throw ConfigError(fmt::format("{}.family: unsupported", path));
}

json matrix_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

json vector_json(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(x);
    return out;
}

json vector_json(const Eigen::VectorXd& v) {
    return vector_json(std::vector<double>(v.data(), v.data() + v.size()));
}

json marginal_json(const MarginalSpec& m) {
    json j;
    j["family"] = std::string(family_name(m.family()));
    switch (m.family()) {
        case Family::Weibull:
            j["shape"] = m.shape();
            j["scale"] = m.scale();
            break;
        case Family::Gaussian:
            j["mean"] = m.mean();
            j["sd"] = m.sd();
            break;
        case Family::Empirical:
            j["support"] = vector_json(m.support_points());
            break;
    }
    return j;
}

std::vector<std::string> names_or_default(const std::vector<std::string>& names, std::size_t p) {
    if (names.size() == p) return names;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < p; ++i) out.push_back(fmt::format("x{}", i + 1));
    return out;
}

}  // namespace

TimeSeriesData parse_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find('\n', start);
        std::string_view line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw DataError("CSV is empty: a header row is required");

    std::vector<std::string> names;
    for (auto h : split(lines[0])) {
        if (h.empty()) throw DataError(fmt::format("line 1, column {}: empty series name", names.size() + 1));
        names.emplace_back(h);
    }
    const std::size_t p = names.size();
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DataError("line 1: duplicate series names");
    for (const auto& nm : names) {
        double probe = 0.0;
        auto [ptr, ec] = std::from_chars(nm.data(), nm.data() + nm.size(), probe);
        if (ec == std::errc() && ptr == nm.data() + nm.size()) throw DataError("line 1: header row is required (found a number)");
    }

    const std::size_t n = lines.size() - 1;
    if (n == 0) throw DataError("CSV has a header but no data rows");
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < n; ++r) {
        const auto cells = split(lines[r + 1]);
        if (cells.size() != p) {
            throw DataError(fmt::format("line {}: expected {} fields, found {}", r + 2, p, cells.size()));
        }
        for (std::size_t c = 0; c < p; ++c) {
            const auto cell = cells[c];
            if (cell.empty()) throw DataError(fmt::format("line {}, column {} ({}): missing value", r + 2, c + 1, names[c]));
            double v = 0.0;
            const char* first = cell.data();
            if (*first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw DataError(fmt::format("line {}, column {} ({}): '{}' is not a finite number", r + 2, c + 1,
                                            names[c], cell));
            }
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return TimeSeriesData(std::move(values), std::move(names));
}

std::string format_csv(const TimeSeriesData& data) {
    std::string out;
    const auto names = names_or_default(data.names, data.dim());
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c) out += ',';
        out += names[c];
    }
    out += '\n';
    for (Eigen::Index r = 0; r < data.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.values.cols(); ++c) {
            if (c) out += ',';
            out += fmt::format("{}", data.values(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw DataError(fmt::format("write to '{}' failed", path.string()));
        }
    }
    std::filesystem::rename(tmp, path);
}

json parse_json(std::string_view text, std::string_view what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos > 0 ? pos - 1 : 0), '\n');
        throw ConfigError(fmt::format("{}: JSON syntax error near line {}", what, line));
    }
}

NamedModel model_from_json(const json& in) {
    const json& j = (in.is_object() && in.contains("model")) ? in["model"] : in;
    const std::string base = (&j == &in) ? "" : "model.";
    if (!j.is_object()) throw ConfigError(base.empty() ? "model: expected a JSON object" : "model: expected an object");

    const json& ms = array(field(j, "marginals", ""), base + "marginals");
    const std::size_t p = ms.size();
    if (p == 0) throw ConfigError(base + "marginals: at least one series is required");
    if (j.contains("p") && count(j["p"], base + "p") != p) {
        throw ConfigError(fmt::format("{}p: {} does not match {} marginals", base, j["p"].dump(), p));
    }

    const json& a = array(field(j, "A", ""), base + "A");
    std::vector<Eigen::MatrixXd> lags;
    const bool nested = !a.empty() && a[0].is_array() && !a[0].empty() && a[0][0].is_array();
    if (nested) {
        for (std::size_t l = 0; l < a.size(); ++l) lags.push_back(matrix(a[l], p, fmt::format("{}A[{}]", base, l)));
    } else {
        lags.push_back(matrix(a, p, base + "A"));
    }
    if (j.contains("k") && count(j["k"], base + "k") != lags.size()) {
        throw ConfigError(fmt::format("{}k: {} does not match {} lag matrices in A", base, j["k"].dump(), lags.size()));
    }

    const std::size_t pairs = p * (p - 1) / 2;
    std::vector<double> rho;
    if (pairs > 0 || j.contains("rho")) {
        const json& r = array(field(j, "rho", ""), base + "rho");
        if (r.size() != pairs) throw ConfigError(fmt::format("{}rho: expected {} values, got {}", base, pairs, r.size()));
        for (std::size_t i = 0; i < r.size(); ++i) rho.push_back(number(r[i], fmt::format("{}rho[{}]", base, i)));
    }
    CorrelationMatrix sigma(p);
    try {
        sigma = CorrelationMatrix(p, Eigen::Map<const Eigen::VectorXd>(rho.data(), static_cast<Eigen::Index>(rho.size())));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}rho: {}", base, e.what()));
    }

    std::vector<MarginalSpec> margs;
    for (std::size_t i = 0; i < p; ++i) margs.push_back(marginal(ms[i], fmt::format("{}marginals[{}]", base, i)));

    NamedModel out;
    try {
        out.model = VartaModel(VarParams(std::move(lags), sigma), std::move(margs));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}A: {}", base, e.what()));
    }
    if (j.contains("names")) {
        const json& nm = array(j["names"], base + "names");
        if (nm.size() != p) throw ConfigError(fmt::format("{}names: expected {} names, got {}", base, p, nm.size()));
        for (std::size_t i = 0; i < p; ++i) {
            if (!nm[i].is_string()) throw ConfigError(fmt::format("{}names[{}]: expected a string", base, i));
            out.names.push_back(nm[i].get<std::string>());
        }
    } else {
        out.names = names_or_default({}, p);
    }
    return out;
}

json model_to_json(const VartaModel& model, const std::vector<std::string>& names) {
    json j;
    j["p"] = model.dim();
    j["k"] = model.order();
    if (model.order() == 1) {
        j["A"] = matrix_json(model.var.a[0]);
    } else {
        j["A"] = json::array();
        for (const auto& a : model.var.a) j["A"].push_back(matrix_json(a));
    }
    j["rho"] = vector_json(model.var.sigma.rho());
    j["marginals"] = json::array();
    for (const auto& m : model.marginals) j["marginals"].push_back(marginal_json(m));
    j["names"] = names_or_default(names, model.dim());
    return j;
}

json fit_result_to_json(const FitResult& fr, const std::vector<std::string>& names) {
    json j;
    j["model"] = model_to_json(fr.model, names);
    j["loglik"] = fr.loglik;
    j["likelihood"] = std::string(kind_name(fr.kind));
    j["converged"] = fr.converged;
    j["information_pd"] = fr.information_pd;
    j["n_iter"] = fr.n_iter;
    j["gradient_norm"] = fr.gradient_norm;
    j["message"] = fr.message;
    j["parameters"] = json::array();
    for (std::size_t i = 0; i < fr.names.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        j["parameters"].push_back({{"name", fr.names[i]},
                                   {"group", std::string(group_name(fr.groups[i]))},
                                   {"estimate", fr.estimates[ii]},
                                   {"se", fr.se[ii]},
                                   {"tvalue", fr.tvalues[ii]}});
    }
    return j;
}

McDesign design_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("design: expected a JSON object");
    McDesign d;
    const json& truth = field(j, "truth", "");
    try {
        d.truth = model_from_json(truth).model;
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("truth.{}", e.what()));
    }
    const json& sizes = array(field(j, "sample_sizes", ""), "sample_sizes");
    for (std::size_t i = 0; i < sizes.size(); ++i) d.sample_sizes.push_back(count(sizes[i], fmt::format("sample_sizes[{}]", i)));
    d.replications = count(field(j, "replications", ""), "replications");
    if (j.contains("ci_level")) d.ci_level = number(j["ci_level"], "ci_level");
    const json& seed = field(j, "seed", "");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
        throw ConfigError("seed: expected a non-negative integer");
    }
    d.seed.seed = seed.get<std::uint64_t>();
    if (j.contains("threads")) d.threads = static_cast<unsigned>(std::max<std::size_t>(1, count(j["threads"], "threads")));
    if (j.contains("likelihood")) {
        if (!j["likelihood"].is_string()) throw ConfigError("likelihood: expected a string");
        try {
            d.kind = parse_kind(j["likelihood"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(fmt::format("likelihood: {}", e.what()));
        }
    }
    validate_design(d);
    return d;
}

json mc_report_to_json(const McReport& report) {
    json j;
    j["ci_level"] = report.ci_level;
    j["seed"] = report.seed;
    j["rng"] = RngSpec::algorithm;
    j["replications"] = report.replications;
    j["parameters"] = json::array();
    for (std::size_t i = 0; i < report.names.size(); ++i) {
        j["parameters"].push_back({{"name", report.names[i]},
                                   {"group", std::string(group_name(report.groups[i]))},
                                   {"truth", report.truth[static_cast<Eigen::Index>(i)]}});
    }
    j["cells"] = json::array();
    for (const auto& c : report.cells) {
        j["cells"].push_back({{"n", c.n},
                              {"replications", c.replications},
                              {"used", c.used},
                              {"not_converged", c.not_converged},
                              {"information_not_pd", c.information_not_pd},
                              {"errors", c.errors},
                              {"coverage", c.coverage},
                              {"bias", c.bias},
                              {"rmse", c.rmse},
                              {"mean_se", c.mean_se}});
    }
    const GroupSummary g = group_summary(report);
    j["groups"] = json::array();
    for (const auto& row : g.rows) {
        j["groups"].push_back({{"group", row.group},
                               {"count", row.count},
                               {"sample_sizes", g.sample_sizes},
                               {"coverage", row.coverage},
                               {"rmse", row.rmse}});
    }
    return j;
}

json residual_report_to_json(const ResidualReport& rep, const std::vector<std::string>& names) {
    const std::size_t p = static_cast<std::size_t>(rep.residuals.cols());
    const auto nm = names_or_default(names, p);
    json j;
    j["caveat"] = rep.caveat;
    j["n_residuals"] = rep.residuals.rows();
    j["band"] = rep.correlogram.band;
    j["max_lag"] = rep.correlogram.max_lag;
    j["series"] = json::array();
    for (std::size_t i = 0; i < p; ++i) {
        std::vector<double> acf;
        for (std::size_t l = 0; l <= rep.correlogram.max_lag; ++l) acf.push_back(rep.correlogram.acf(i, l));
        const MomentReport& m = rep.moments[i];
        j["series"].push_back(
            {{"name", nm[i]},
             {"acf", acf},
             {"ljung_box", {{"statistic", rep.whiteness[i].statistic},
                            {"p_value", rep.whiteness[i].p_value},
                            {"lags", rep.whiteness[i].lags}}},
             {"latent_moments", {{"mean", m.mean},
                                 {"variance", m.variance},
                                 {"skewness", m.skewness},
                                 {"excess_kurtosis", m.excess_kurtosis},
                                 {"flags", {{"mean", m.flag_mean},
                                            {"variance", m.flag_variance},
                                            {"skewness", m.flag_skewness},
                                            {"excess_kurtosis", m.flag_kurtosis}}}}}});
    }
    json ccf = json::array();
    for (std::size_t l = 0; l <= rep.correlogram.max_lag; ++l) ccf.push_back(matrix_json(rep.correlogram.at(l)));
    j["ccf"] = std::move(ccf);
    if (p > 1) {
        j["worst_pair"] = {{"a", nm[rep.worst_pair.series_a]},
                           {"b", nm[rep.worst_pair.series_b]},
                           {"violations", rep.worst_pair.violations},
                           {"tested", rep.worst_pair.tested}};
    }
    return j;
}

std::string correlogram_csv(const Correlogram& c, const std::vector<std::string>& names) {
    const std::size_t p = c.lags.empty() ? 0 : static_cast<std::size_t>(c.lags[0].rows());
    const auto nm = names_or_default(names, p);
    std::string out = "lag,series,against,value,band\n";
    for (std::size_t l = 0; l <= c.max_lag; ++l) {
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                out += fmt::format("{},{},{},{},{}\n", l, nm[i], nm[j],
                                   c.at(l)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), c.band);
            }
        }
    }
    return out;
}

json forecast_summary_to_json(const ForecastSummary& summary, const std::vector<std::string>& names) {
    json j;
    j["levels"] = summary.levels;
    j["rows"] = json::array();
    for (const auto& r : summary.rows) {
        json q = json::object();
        for (std::size_t i = 0; i < summary.levels.size(); ++i) {
            q[fmt::format("{}", summary.levels[i])] = r.quantiles[i];
        }
        j["rows"].push_back({{"step", r.step},
                             {"series", r.series < names.size() ? names[r.series] : fmt::format("x{}", r.series + 1)},
                             {"mean", r.mean},
                             {"median", r.median},
                             {"quantiles", std::move(q)}});
    }
    return j;
}

std::string forecast_csv(const ForecastResult& fr) {
    const auto nm = names_or_default(fr.names, fr.dim);
    std::string out = "path,step,series,value,latent\n";
    for (std::size_t m = 0; m < fr.paths; ++m) {
        for (std::size_t s = 0; s < fr.horizon; ++s) {
            for (std::size_t i = 0; i < fr.dim; ++i) {
                out += fmt::format("{},{},{},{},{}\n", m + 1, s + 1, nm[i], fr.value(m, s, i), fr.latent_value(m, s, i));
            }
        }
    }
    return out;
}

std::string_view kind_name(LikelihoodKind k) {
    switch (k) {
        case LikelihoodKind::Auto: return "auto";
        case LikelihoodKind::Exact: return "exact";
        case LikelihoodKind::Conditional: return "conditional";
    }
    return "auto";
}

LikelihoodKind parse_kind(std::string_view s) {
    if (s == "auto") return LikelihoodKind::Auto;
    if (s == "exact") return LikelihoodKind::Exact;
    if (s == "conditional") return LikelihoodKind::Conditional;
    throw std::invalid_argument(fmt::format("unknown likelihood '{}' (expected auto, exact or conditional)", s));
}

}  // namespace varta
