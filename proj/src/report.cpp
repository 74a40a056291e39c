// Copyright 2026 The darkrsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "darkrsp/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"

namespace darkrsp {

namespace {

using json = nlohmann::ordered_json;

std::string digits(const std::vector<int> &outcome) {
    std::string s;
    for (int d : outcome) {
        s += std::to_string(d);
    }
    return s;
}

std::string g17(double v) {
    return fmt::format("{:.17g}", v);
}

const char *classifier_name(Classifier c) {
    return c == Classifier::Conservative ? "Conservative" : "SeparabilityAware";
}

const char *accounting_name(MessageAccounting a) {
    switch (a) {
        case MessageAccounting::SuccessOnly:
            return "success_only";
        case MessageAccounting::SuccessFail:
            return "success_fail";
        case MessageAccounting::FullOutcome:
            return "full_outcome";
    }
    return "?";
}

const char *kind_name(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::Exact:
            return "exact";
        case ProtocolKind::Probabilistic:
            return "probabilistic";
        case ProtocolKind::Joint:
            return "joint";
    }
    return "?";
}

void check_close(std::vector<std::string> &failures, const char *what, double got, double want, double tol) {
    if (!(std::abs(got - want) <= tol)) {
        failures.push_back(fmt::format("{}: got {} expected {} (tolerance {})", what, g17(got), g17(want), g17(tol)));
    }
}

Transcript run_one(const ScenarioEntry &entry, const EnsembleParams &params) {
    if (entry.protocol == ProtocolChoice::Joint) {
        return run_joint_rsp(std::get<QutritParams>(params));
    }
    ProtocolConfig config = entry.config;
    config.params = params;
    return run_protocol(config);
}

json ledger_to_json(const LedgerRow &l) {
    json channels = json::array();
    for (const auto &c : l.channels) {
        channels.push_back({{"from", c.from}, {"to", c.to}, {"cbits", c.cbits}});
    }
    return {{"ebits", l.ebits},
            {"cbits_per_party", l.cbits_per_party},
            {"cbits_total", l.cbits_total},
            {"channels", channels}};
}

json run_to_json(const RunReport &r) {
    json params = json::object();
    for (const auto &[k, v] : r.params) {
        params[k] = v;
    }
    json outcomes = json::array();
    for (const auto &o : r.outcomes) {
        json row = {{"outcome", o.outcome},
                    {"probability", o.probability},
                    {"success", o.success},
                    {"degenerate", o.degenerate},
                    {"fidelity_min", o.fidelity_min},
                    {"messages", o.messages}};
        if (o.count) {
            row["count"] = *o.count;
        }
        outcomes.push_back(std::move(row));
    }
    json j = {{"params", params},
              {"success_probability", r.success_probability},
              {"outcomes", outcomes},
              {"ledger", ledger_to_json(r.ledger)}};
    if (r.sample) {
        j["sample"] = {{"trials", r.sample->trials},
                       {"seed", r.sample->seed},
                       {"successes", r.sample->successes},
                       {"empirical_success_rate", r.sample->empirical_success_rate}};
    }
    j["failures"] = r.failures;
    return j;
}

json report_to_json(const Report &report) {
    json entries = json::array();
    for (const auto &e : report.entries) {
        json runs = json::array();
        for (const auto &r : e.runs) {
            runs.push_back(run_to_json(r));
        }
        entries.push_back({{"index", e.index},
                           {"name", e.name},
                           {"protocol", e.protocol},
                           {"resource", e.resource},
                           {"ensemble", e.ensemble},
                           {"classifier", e.classifier},
                           {"accounting", e.accounting},
                           {"status", to_string(e.status)},
                           {"error", e.error},
                           {"duration_ms", e.duration_ms},
                           {"runs", runs}});
    }
    return {{"format", kReportFormatTag},
            {"scenario", report.scenario},
            {"passed", report.passed},
            {"entries", entries}};
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string render_csv(const Report &report) {
    std::string out = "scenario,entry,outcome,probability,success,fidelity_min\n";
    for (const auto &e : report.entries) {
        for (std::size_t k = 0; k < e.runs.size(); ++k) {
            const std::string entry = e.runs.size() > 1 ? e.name + "#" + std::to_string(k) : e.name;
            for (const auto &o : e.runs[k].outcomes) {
                out += fmt::format("{},{},{},{},{},{}\n", csv_field(report.scenario), csv_field(entry), o.outcome,
                                   g17(o.probability), o.success ? "true" : "false", g17(o.fidelity_min));
            }
        }
    }
    return out;
}

std::string render_text(const Report &report) {
    std::string out = fmt::format("scenario {}  {}\n", report.scenario, report.passed ? "PASSED" : "FAILED");
    for (const auto &e : report.entries) {
        out += fmt::format("\n[{}] {}  {}  status={}  ({:.1f} ms)\n", e.index, e.name, e.protocol, to_string(e.status),
                           e.duration_ms);
        out += fmt::format("    resource: {}\n    ensemble: {}\n    classifier: {}  accounting: {}\n", e.resource,
                           e.ensemble, e.classifier, e.accounting);
        if (!e.error.empty()) {
            out += fmt::format("    error: {}\n", e.error);
        }
        for (std::size_t k = 0; k < e.runs.size(); ++k) {
            const auto &r = e.runs[k];
            std::string params;
            for (const auto &[name, v] : r.params) {
                params += fmt::format(" {}={:.6g}", name, v);
            }
            out += fmt::format("  run {}:{}\n", k, params);
            std::size_t width = 7;
            for (const auto &o : r.outcomes) {
                width = std::max(width, o.outcome.size());
            }
            out += fmt::format("    {:<{}}  {:>22}  {:<7}  {:>22}  {}\n", "outcome", width, "probability", "success",
                               "fidelity_min", "messages");
            for (const auto &o : r.outcomes) {
                std::string msgs;
                for (const auto &m : o.messages) {
                    msgs += (msgs.empty() ? "" : " ") + m;
                }
                if (o.degenerate) {
                    msgs = "(degenerate)";
                }
                out += fmt::format("    {:<{}}  {:>22}  {:<7}  {:>22}  {}\n", o.outcome, width, g17(o.probability),
                                   o.success ? "yes" : "no", g17(o.fidelity_min), msgs);
            }
            out += fmt::format("    success_probability={}\n", g17(r.success_probability));
            out += fmt::format("    ebits={} cbits_per_party={} cbits_total={}\n", g17(r.ledger.ebits),
                               g17(r.ledger.cbits_per_party), g17(r.ledger.cbits_total));
            if (r.sample) {
                out += fmt::format("    sample: trials={} seed={} successes={} empirical_success_rate={}\n",
                                   r.sample->trials, r.sample->seed, r.sample->successes,
                                   g17(r.sample->empirical_success_rate));
            }
            for (const auto &f : r.failures) {
                out += fmt::format("    FAIL {}\n", f);
            }
        }
    }
    return out;
}

EntryStatus status_from_string(const std::string &s) {
    if (s == "passed") {
        return EntryStatus::Passed;
    }
    if (s == "failed") {
        return EntryStatus::Failed;
    }
    if (s == "errored") {
        return EntryStatus::Errored;
    }
    if (s == "no-expectation") {
        return EntryStatus::Unchecked;
    }
    fail(ErrorCode::Parse, "unknown entry status '" + s + "'");
}

}  // namespace

const char *to_string(EntryStatus status) {
    switch (status) {
        case EntryStatus::Passed:
            return "passed";
        case EntryStatus::Failed:
            return "failed";
        case EntryStatus::Errored:
            return "errored";
        case EntryStatus::Unchecked:
            return "no-expectation";
    }
    return "?";
}

ReportFormat report_format_from_string(std::string_view name) {
    if (name == "json") {
        return ReportFormat::Json;
    }
    if (name == "csv") {
        return ReportFormat::Csv;
    }
    if (name == "text") {
        return ReportFormat::Text;
    }
    fail(ErrorCode::InvalidArgument, "unknown report format '" + std::string(name) + "' (json, csv, text)");
}

RunReport summarize_run(const Transcript &t, const std::optional<Expectation> &expect) {
    RunReport r;
    r.params = named_params(t.config.params);
    r.success_probability = t.success_probability;
    for (std::size_t i = 0; i < t.outcomes.size(); ++i) {
        const auto &o = t.outcomes[i];
        OutcomeRow row;
        row.outcome = digits(o.outcome);
        row.probability = o.probability;
        row.success = o.success;
        row.degenerate = o.degenerate;
        if (!o.degenerate && !o.fidelities.empty()) {
            row.fidelity_min = *std::min_element(o.fidelities.begin(), o.fidelities.end());
        }
        for (const auto &m : o.messages) {
            row.messages.push_back(m ? std::to_string(*m) : "fail");
        }
        if (t.sample) {
            row.count = t.sample->counts[i];
        }
        r.outcomes.push_back(std::move(row));
    }
    r.ledger = {t.ledger.ebits, t.ledger.cbits_per_party, t.ledger.cbits_total, t.ledger.channels};
    if (t.sample) {
        r.sample = SampleRow{t.sample->trials, t.sample->seed, t.sample->successes, t.sample->empirical_success_rate};
    }
    if (!expect) {
        return r;
    }

    const auto &e = *expect;
    std::optional<double> target = e.success_probability;
    if (e.superposed_formula) {
        const auto &res = std::get<resource::SuperposedFourQubit>(t.config.resource);
        const auto p = success_probability_formula(res.a, res.b);
        target = p.ps;
        for (const auto &o : t.outcomes) {
            const double want = o.outcome == std::vector<int>{0, 0}   ? p.p00
                                : o.outcome == std::vector<int>{1, 1} ? p.p11
                                : o.outcome == std::vector<int>{0, 1} ? p.p01
                                                                      : p.p10;
            check_close(r.failures, ("P(" + digits(o.outcome) + ")").c_str(), o.probability, want, e.tolerance);
        }
    }
    if (target) {
        check_close(r.failures, "success_probability", t.success_probability, *target, e.tolerance);
    }
    if (e.empirical_sigma && t.sample && target) {
        const double p = *target;
        const double n = static_cast<double>(t.sample->trials);
        const double band = *e.empirical_sigma * std::sqrt(p * (1.0 - p) / n);
        check_close(r.failures, "empirical_success_rate", t.sample->empirical_success_rate, p,
                    std::max(band, e.tolerance));
    }
    if (e.ebits) {
        check_close(r.failures, "ebits", t.ledger.ebits, *e.ebits, e.ledger_tolerance);
    }
    if (e.cbits_per_party) {
        check_close(r.failures, "cbits_per_party", t.ledger.cbits_per_party, *e.cbits_per_party, e.ledger_tolerance);
    }
    if (e.cbits_total) {
        check_close(r.failures, "cbits_total", t.ledger.cbits_total, *e.cbits_total, e.ledger_tolerance);
    }
    if (e.min_fidelity) {
        for (const auto &o : t.outcomes) {
            if (!o.success) {
                continue;
            }
            for (double f : o.fidelities) {
                if (f < *e.min_fidelity) {
                    r.failures.push_back(fmt::format("fidelity of outcome {}: {} below {}", digits(o.outcome), g17(f),
                                                     g17(*e.min_fidelity)));
                }
            }
        }
    }
    return r;
}

EntryReport run_entry(const ScenarioEntry &entry, std::size_t index) {
    EntryReport rep;
    rep.index = index;
    rep.name = entry.name;
    rep.resource = describe(entry.config.resource);
    rep.ensemble = describe(entry.config.ensemble);
    rep.classifier = classifier_name(entry.config.classifier);
    rep.accounting = accounting_name(entry.config.accounting);
    rep.protocol = to_string(entry.protocol);
    const auto start = std::chrono::steady_clock::now();
    try {
        bool failed = false;
        for (const auto &params : expand_params(entry)) {
            const Transcript t = run_one(entry, params);
            rep.protocol = kind_name(t.kind);
            rep.runs.push_back(summarize_run(t, entry.expect));
            failed = failed || !rep.runs.back().failures.empty();
        }
        rep.status = !entry.expect ? EntryStatus::Unchecked : failed ? EntryStatus::Failed : EntryStatus::Passed;
    } catch (const std::exception &ex) {
        rep.status = EntryStatus::Errored;
        rep.error = ex.what();
    }
    rep.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

Report run_scenario(const ScenarioConfig &config) {
    validate_scenario(config);
    Report report;
    report.scenario = config.name;
    report.entries.resize(config.entries.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min<std::size_t>(
        config.entries.size(), std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8));
    {
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (std::size_t i = next++; i < config.entries.size(); i = next++) {
                    report.entries[i] = run_entry(config.entries[i], i);
                }
            });
        }
    }
    report.passed = std::none_of(report.entries.begin(), report.entries.end(), [](const EntryReport &e) {
        return e.status == EntryStatus::Failed || e.status == EntryStatus::Errored;
    });
    return report;
}

std::string render_report(const Report &report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json:
            return report_to_json(report).dump(2) + "\n";
        case ReportFormat::Csv:
            return render_csv(report);
        case ReportFormat::Text:
            return render_text(report);
    }
    return {};
}

void emit_report(const Report &report, ReportFormat format, const std::filesystem::path &path) {
    const std::string text = render_report(report, format);
    if (path.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        fail(ErrorCode::Io, "cannot write report to " + path.string());
    }
}

Report report_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != kReportFormatTag) {
            fail(ErrorCode::Parse, "not a darkrsp report");
        }
        Report report;
        report.scenario = j.at("scenario").get<std::string>();
        report.passed = j.at("passed").get<bool>();
        for (const auto &je : j.at("entries")) {
            EntryReport e;
            e.index = je.at("index").get<std::size_t>();
            e.name = je.at("name").get<std::string>();
            e.protocol = je.at("protocol").get<std::string>();
            e.resource = je.at("resource").get<std::string>();
            e.ensemble = je.at("ensemble").get<std::string>();
            e.classifier = je.at("classifier").get<std::string>();
            e.accounting = je.at("accounting").get<std::string>();
            e.status = status_from_string(je.at("status").get<std::string>());
            e.error = je.at("error").get<std::string>();
            e.duration_ms = je.at("duration_ms").get<double>();
            for (const auto &jr : je.at("runs")) {
                RunReport r;
                for (const auto &[k, v] : jr.at("params").items()) {
                    r.params[k] = v.get<double>();
                }
                r.success_probability = jr.at("success_probability").get<double>();
                for (const auto &jo : jr.at("outcomes")) {
                    OutcomeRow o;
                    o.outcome = jo.at("outcome").get<std::string>();
                    o.probability = jo.at("probability").get<double>();
                    o.success = jo.at("success").get<bool>();
                    o.degenerate = jo.at("degenerate").get<bool>();
                    o.fidelity_min = jo.at("fidelity_min").get<double>();
                    o.messages = jo.at("messages").get<std::vector<std::string>>();
                    if (jo.contains("count")) {
                        o.count = jo.at("count").get<std::uint64_t>();
                    }
                    r.outcomes.push_back(std::move(o));
                }
                const auto &jl = jr.at("ledger");
                r.ledger.ebits = jl.at("ebits").get<double>();
                r.ledger.cbits_per_party = jl.at("cbits_per_party").get<double>();
                r.ledger.cbits_total = jl.at("cbits_total").get<double>();
                for (const auto &jc : jl.at("channels")) {
                    r.ledger.channels.push_back(
                        {jc.at("from").get<std::string>(), jc.at("to").get<std::string>(), jc.at("cbits").get<double>()});
                }
                if (jr.contains("sample")) {
                    const auto &js = jr.at("sample");
                    r.sample = SampleRow{js.at("trials").get<std::uint64_t>(), js.at("seed").get<std::uint64_t>(),
                                         js.at("successes").get<std::uint64_t>(),
                                         js.at("empirical_success_rate").get<double>()};
                }
                r.failures = jr.at("failures").get<std::vector<std::string>>();
                e.runs.push_back(std::move(r));
            }
            report.entries.push_back(std::move(e));
        }
        return report;
    } catch (const json::exception &ex) {
        fail(ErrorCode::Parse, std::string("malformed report: ") + ex.what());
    }
}

}  // namespace darkrsp
