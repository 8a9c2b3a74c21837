#pragma once

#include "k3q/qseries.hpp"
#include "k3q/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace k3q {

// Optional (level, weight, poleOrder) annotation carried by a document.
struct SeriesMeta {
    std::optional<int> level;
    std::optional<int> weight;
    std::optional<int> pole_order;

    bool any() const { return level || weight || pole_order; }
};

// Machine-readable coefficient table: one object per series, coefficients
// as exact rational strings in lowest terms ("p/q", the "/q" dropped for
// integers). Emission is deterministic, so parse-then-emit is the identity
// on emitted documents.
struct SeriesDocument {
    long long valuation = 0;
    long long order = 0;
    std::vector<std::string> coefficients;
    SeriesMeta metadata;
};

inline SeriesDocument to_document(const QSeries& f, SeriesMeta meta = {}) {
    SeriesDocument doc;
    doc.valuation = f.valuation();
    doc.order = f.order();
    for (long long e = f.valuation(); e <= f.order(); ++e)
        doc.coefficients.push_back(rational_to_string(f.coeff(e)));
    doc.metadata = meta;
    return doc;
}

inline QSeries from_document(const SeriesDocument& doc) {
    if (doc.order - doc.valuation + 1 != static_cast<long long>(doc.coefficients.size()))
        throw std::invalid_argument("series document: coefficient count does not match the window");
    std::vector<Rational> c;
    c.reserve(doc.coefficients.size());
    for (const auto& s : doc.coefficients) c.push_back(parse_rational(s));
    return QSeries(doc.valuation, std::move(c));
}

inline std::string dump_document(const SeriesDocument& doc, bool pretty = false) {
    nlohmann::json j;
    j["valuation"] = doc.valuation;
    j["order"] = doc.order;
    j["coefficients"] = doc.coefficients;
    if (doc.metadata.any()) {
        nlohmann::json m;
        if (doc.metadata.level) m["level"] = *doc.metadata.level;
        if (doc.metadata.weight) m["weight"] = *doc.metadata.weight;
        if (doc.metadata.pole_order) m["poleOrder"] = *doc.metadata.pole_order;
        j["metadata"] = m;
    }
    return pretty ? j.dump(2) : j.dump();
}

inline SeriesDocument parse_document(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SeriesDocument doc;
    doc.valuation = j.at("valuation").get<long long>();
    doc.order = j.at("order").get<long long>();
    doc.coefficients = j.at("coefficients").get<std::vector<std::string>>();
    if (j.contains("metadata")) {
        const auto& m = j.at("metadata");
        if (m.contains("level")) doc.metadata.level = m.at("level").get<int>();
        if (m.contains("weight")) doc.metadata.weight = m.at("weight").get<int>();
        if (m.contains("poleOrder")) doc.metadata.pole_order = m.at("poleOrder").get<int>();
    }
    // validate and canonicalize through the series representation
    from_document(doc);
    return doc;
}

}  // namespace k3q
