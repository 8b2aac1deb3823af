#include "dsm/dataset.hpp"
#include "dsm/error.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dsm {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::bad_request: return "bad_request";
    case ErrorCode::unknown_dimension: return "unknown_dimension";
    case ErrorCode::unknown_value: return "unknown_value";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::invalid_data: return "invalid_data";
    case ErrorCode::io: return "io";
    case ErrorCode::internal: return "internal";
    }
    return "internal";
}

namespace {

std::string trim(std::string_view s)
{
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b]))
        ++b;
    while (e > b && is_space(s[e - 1]))
        --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(const std::string& message)
{
    throw Error(ErrorCode::invalid_data, message);
}

} // namespace

std::optional<std::size_t> Dimension::index_of(std::string_view label) const
{
    const auto it = std::find(domain.begin(), domain.end(), label);
    if (it == domain.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - domain.begin());
}

Dataset::Dataset(std::string id_column, std::vector<std::string> dimension_names, std::vector<Record> records)
    : m_id_column(std::move(id_column)), m_records(std::move(records))
{
    if (dimension_names.empty())
        fail("dataset has no dimensions");
    if (m_records.empty())
        fail("dataset has no records");

    std::unordered_set<std::string> seen;
    for (const auto& name : dimension_names) {
        if (name.empty())
            fail("empty dimension name");
        if (!seen.insert(name).second)
            fail("duplicate dimension '" + name + "'");
    }

    const std::size_t M = dimension_names.size();
    m_dimensions.reserve(M);
    for (auto& name : dimension_names)
        m_dimensions.push_back(Dimension{std::move(name), {}});

    std::unordered_set<std::string> ids;
    std::vector<std::unordered_map<std::string, std::size_t>> lookup(M);
    m_codes.reserve(m_records.size() * M);
    for (const auto& r : m_records) {
        if (r.id.empty())
            fail("empty record id");
        if (!ids.insert(r.id).second)
            fail("duplicate record id '" + r.id + "'");
        if (r.values.size() != M)
            fail("record '" + r.id + "' has " + std::to_string(r.values.size()) + " values, expected " + std::to_string(M));
        for (std::size_t m = 0; m < M; ++m) {
            const auto& v = r.values[m];
            if (v.empty())
                fail("record '" + r.id + "' has an empty value for dimension '" + m_dimensions[m].name + "'");
            auto [it, inserted] = lookup[m].try_emplace(v, m_dimensions[m].domain.size());
            if (inserted)
                m_dimensions[m].domain.push_back(v);
            m_codes.push_back(it->second);
        }
    }
}

std::size_t Dataset::dimension_index(std::string_view name) const
{
    for (std::size_t m = 0; m < m_dimensions.size(); ++m)
        if (m_dimensions[m].name == name)
            return m;
    throw Error(ErrorCode::unknown_dimension, "unknown dimension '" + std::string(name) + "'");
}

std::vector<std::vector<std::string>> parse_dsv(std::istream& in, char delimiter)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;      // inside quotes
    bool was_quoted = false;  // current field had quotes; keep its content verbatim
    bool any = false;         // current row has content

    auto end_field = [&] {
        row.push_back(was_quoted ? field : trim(field));
        field.clear();
        was_quoted = false;
    };
    auto end_row = [&] {
        end_field();
        // Blank lines are skipped.
        if (any)
            rows.push_back(std::move(row));
        row.clear();
        any = false;
    };

    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t i = 0;
    if (text.rfind("\xEF\xBB\xBF", 0) == 0)
        i = 3;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            if (!trim(field).empty())
                fail("unexpected quote inside unquoted field");
            field.clear();
            quoted = was_quoted = any = true;
        } else if (c == delimiter) {
            end_field();
            any = true;
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r') {
            // CRLF handled by the following '\n'
        } else {
            if (was_quoted && c != ' ' && c != '\t')
                fail("unexpected character after closing quote");
            if (!was_quoted)
                field.push_back(c);
            if (c != ' ' && c != '\t')
                any = true;
        }
    }
    if (quoted)
        fail("unterminated quoted field");
    end_row();
    return rows;
}

Dataset load_dataset(std::istream& in, const DsvFormat& format)
{
    auto rows = parse_dsv(in, format.delimiter);
    if (rows.empty())
        fail("missing header row");
    auto header = std::move(rows.front());
    if (header.size() < 2)
        fail("header needs an id column and at least one dimension");

    std::vector<Record> records;
    records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        auto& row = rows[r];
        if (row.size() != header.size())
            fail("row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) + " fields, expected " + std::to_string(header.size()));
        Record rec;
        rec.id = std::move(row.front());
        if (rec.id.empty())
            fail("row " + std::to_string(r + 1) + " has an empty id");
        rec.values.assign(std::make_move_iterator(row.begin() + 1), std::make_move_iterator(row.end()));
        records.push_back(std::move(rec));
    }
    std::string id_column = std::move(header.front());
    header.erase(header.begin());
    return Dataset(std::move(id_column), std::move(header), std::move(records));
}

Dataset load_dataset_file(const std::string& path, const DsvFormat& format)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot open '" + path + "'");
    return load_dataset(in, format);
}

namespace {

void write_field(std::ostream& out, const std::string& s, char delimiter)
{
    const bool needs_quotes = s.empty() || s.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos
        || s.front() == ' ' || s.front() == '\t' || s.back() == ' ' || s.back() == '\t';
    if (!needs_quotes) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"')
            out << '"';
        out << c;
    }
    out << '"';
}

} // namespace

void write_dataset(std::ostream& out, const Dataset& dataset, const DsvFormat& format)
{
    const char d = format.delimiter;
    write_field(out, dataset.id_column(), d);
    for (const auto& dim : dataset.dimensions()) {
        out << d;
        write_field(out, dim.name, d);
    }
    out << '\n';
    for (const auto& r : dataset.records()) {
        write_field(out, r.id, d);
        for (const auto& v : r.values) {
            out << d;
            write_field(out, v, d);
        }
        out << '\n';
    }
}

const std::vector<std::string>& domain_of(const Dataset& dataset, std::string_view dimension)
{
    return dataset.dimension(dimension).domain;
}

FrequencyTable summarize(const Dataset& dataset)
{
    FrequencyTable table;
    table.reserve(dataset.dimension_count());
    for (std::size_t m = 0; m < dataset.dimension_count(); ++m) {
        const auto& dim = dataset.dimensions()[m];
        std::vector<std::size_t> counts(dim.domain.size(), 0);
        for (std::size_t i = 0; i < dataset.size(); ++i)
            ++counts[dataset.code(i, m)];
        std::vector<std::pair<std::string, std::size_t>> entries;
        for (std::size_t c = 0; c < counts.size(); ++c)
            entries.emplace_back(dim.domain[c], counts[c]);
        table.emplace_back(dim.name, std::move(entries));
    }
    return table;
}

} // namespace dsm
