#ifndef DSM_DATASET_HPP
#define DSM_DATASET_HPP

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dsm {

// A categorical design dimension. The domain keeps first-occurrence order.
struct Dimension
{
    std::string name;
    std::vector<std::string> domain;

    // Index of `label` in the domain, if present.
    std::optional<std::size_t> index_of(std::string_view label) const;

    bool operator==(const Dimension&) const = default;
};

// One row of the dataset. values[m] is the label for dimension m.
struct Record
{
    std::string id;
    std::vector<std::string> values;

    bool operator==(const Record&) const = default;
};

struct DsvFormat
{
    char delimiter = ',';
};

// Immutable categorical dataset: N records over M named dimensions.
//
// Besides the labels, every cell is kept as its category index into the
// dimension's domain so numeric kernels never compare strings.
class Dataset
{
public:
    // Validates every invariant; throws dsm::Error(invalid_data) on violation.
    // Domains are inferred from the records in first-occurrence order.
    Dataset(std::string id_column, std::vector<std::string> dimension_names, std::vector<Record> records);

    std::size_t size() const noexcept { return m_records.size(); }
    std::size_t dimension_count() const noexcept { return m_dimensions.size(); }

    const std::string& id_column() const noexcept { return m_id_column; }
    const std::vector<Dimension>& dimensions() const noexcept { return m_dimensions; }
    const std::vector<Record>& records() const noexcept { return m_records; }
    const Record& record(std::size_t i) const { return m_records.at(i); }

    // Throws dsm::Error(unknown_dimension).
    std::size_t dimension_index(std::string_view name) const;
    const Dimension& dimension(std::string_view name) const { return m_dimensions[dimension_index(name)]; }

    // Category index of record i on dimension m.
    std::size_t code(std::size_t i, std::size_t m) const { return m_codes[i * m_dimensions.size() + m]; }

    bool operator==(const Dataset& other) const
    {
        return m_id_column == other.m_id_column && m_dimensions == other.m_dimensions && m_records == other.m_records;
    }

private:
    std::string m_id_column;
    std::vector<Dimension> m_dimensions;
    std::vector<Record> m_records;
    std::vector<std::size_t> m_codes;
};

Dataset load_dataset(std::istream& in, const DsvFormat& format = {});
Dataset load_dataset_file(const std::string& path, const DsvFormat& format = {});

void write_dataset(std::ostream& out, const Dataset& dataset, const DsvFormat& format = {});

const std::vector<std::string>& domain_of(const Dataset& dataset, std::string_view dimension);

// Per dimension (in dataset order), category -> count in domain order.
using FrequencyTable = std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::size_t>>>>;
FrequencyTable summarize(const Dataset& dataset);

// Splits one delimiter-separated line set into rows. Double-quoted fields may
// contain delimiters, newlines and doubled quotes. Exposed for testing.
std::vector<std::vector<std::string>> parse_dsv(std::istream& in, char delimiter);

} // namespace dsm

#endif // DSM_DATASET_HPP
