#include "zsl/io.hpp"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace zsl {
namespace {

constexpr Eigen::Index kLargeEntryCount = 10'000'000;

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

bool is_comment_or_blank(const std::string& line) {
    const std::size_t first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

// Reads the next content line; returns false at EOF. `line_no` tracks the
// physical line for error messages.
bool next_content_line(std::istream& in, std::string& line, int& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!is_comment_or_blank(line)) return true;
    }
    return false;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

void warn_if_large(const std::string& path, Eigen::Index rows, Eigen::Index cols) {
    if (rows * cols > kLargeEntryCount)
        std::cerr << "warning: " << path << " holds " << rows << " x " << cols
                  << " entries; expect slow text I/O\n";
}

std::string trim(const std::string& s) {
    const std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const std::size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

Matrix read_matrix(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::string line;
    int line_no = 0;
    if (!next_content_line(in, line, line_no)) fail(path, line_no, "missing 'rows cols' header");

    Eigen::Index rows = 0, cols = 0;
    {
        std::istringstream header(line);
        std::string extra;
        if (!(header >> rows >> cols) || rows < 0 || cols < 0 || (header >> extra))
            fail(path, line_no, "malformed header, expected 'rows cols'");
    }
    warn_if_large(path, rows, cols);

    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!next_content_line(in, line, line_no))
            fail(path, line_no, "unexpected end of file: got " + std::to_string(r) + " of " +
                                    std::to_string(rows) + " rows");
        std::istringstream row(line);
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!(row >> m(r, c))) {
                std::string token;
                std::istringstream(line) >> token;  // re-scan for a message only
                fail(path, line_no,
                     "expected " + std::to_string(cols) + " numeric values, failed at column " +
                         std::to_string(c + 1));
            }
        }
        std::string extra;
        if (row >> extra)
            fail(path, line_no, "row has more than " + std::to_string(cols) + " values");
    }
    return m;
}

void write_matrix(const std::string& path, const Matrix& m) {
    warn_if_large(path, m.rows(), m.cols());
    std::ofstream out = open_for_write(path);
    out.precision(std::numeric_limits<double>::max_digits10);
    out << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << " ";
            out << m(r, c);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<int> read_labels(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::vector<int> labels;
    std::string line;
    int line_no = 0;
    while (next_content_line(in, line, line_no)) {
        std::istringstream row(line);
        int value = 0;
        std::string extra;
        if (!(row >> value) || (row >> extra))
            fail(path, line_no, "expected a single integer label");
        if (value < 0) fail(path, line_no, "labels are 0-based, got " + std::to_string(value));
        labels.push_back(value);
    }
    return labels;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out = open_for_write(path);
    for (const int l : labels) out << l << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

const std::string& Manifest::at(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) throw std::runtime_error("manifest is missing key: " + key);
    return it->second;
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in = open_for_read(path);
    Manifest manifest;
    std::string line;
    int line_no = 0;
    while (next_content_line(in, line, line_no)) {
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(path, line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(path, line_no, "empty key");
        if (value.empty()) fail(path, line_no, "empty value for key '" + key + "'");
        if (!manifest.entries.emplace(key, value).second)
            fail(path, line_no, "duplicate key '" + key + "'");
    }
    return manifest;
}

void write_manifest(const std::string& path, const Manifest& manifest) {
    std::ofstream out = open_for_write(path);
    for (const auto& [key, value] : manifest.entries) out << key << " = " << value << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

SemanticMatrix class_semantics_from_instance_attributes(const Matrix& instance_attrs,
                                                        const std::vector<int>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != instance_attrs.rows())
        throw std::invalid_argument("attribute rows and labels disagree in length");
    if (labels.empty()) throw std::invalid_argument("no instance attributes given");
    int num_classes = 0;
    for (const int l : labels) {
        if (l < 0) throw std::invalid_argument("labels are 0-based");
        num_classes = std::max(num_classes, l + 1);
    }
    Matrix sums = Matrix::Zero(instance_attrs.cols(), num_classes);
    std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        sums.col(labels[i]) += instance_attrs.row(static_cast<Eigen::Index>(i)).transpose();
        ++counts[static_cast<std::size_t>(labels[i])];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw std::invalid_argument("class " + std::to_string(c) +
                                        " has no instances to average");
        sums.col(c) /= counts[static_cast<std::size_t>(c)];
    }
    return SemanticMatrix{std::move(sums)};
}

namespace {

const std::vector<std::string> kManifestKeys = {
    "seen_features",   "seen_labels",      "seen_semantics", "seen_instance_attributes",
    "unseen_features", "unseen_semantics", "unseen_labels",  "l2_normalize_rows"};

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error("manifest key '" + key + "' must be true/false, got '" + value + "'");
}

void l2_normalize(Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double norm = m.row(r).norm();
        if (norm > 0) m.row(r) /= norm;  // zero rows stay zero
    }
}

}  // namespace

Bundle load_bundle(const std::string& manifest_path) {
    const Manifest manifest = read_manifest(manifest_path);
    for (const auto& [key, value] : manifest.entries) {
        (void)value;
        bool known = false;
        for (const auto& k : kManifestKeys) known = known || k == key;
        if (!known) throw std::runtime_error("unknown manifest key: " + key);
    }
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    const auto resolve = [&](const std::string& key) {
        const std::filesystem::path p(manifest.at(key));
        return (p.is_absolute() ? p : base / p).string();
    };

    Bundle bundle;
    bundle.seen.features = read_matrix(resolve("seen_features"));
    bundle.seen.labels = read_labels(resolve("seen_labels"));

    const bool has_class = manifest.has("seen_semantics");
    const bool has_instance = manifest.has("seen_instance_attributes");
    if (has_class == has_instance)
        throw std::runtime_error(
            "manifest must name exactly one of seen_semantics / seen_instance_attributes");
    if (has_class)
        bundle.A_s.vectors = read_matrix(resolve("seen_semantics")).transpose();
    else
        bundle.A_s = class_semantics_from_instance_attributes(
            read_matrix(resolve("seen_instance_attributes")), bundle.seen.labels);
    bundle.seen.num_classes = static_cast<int>(bundle.A_s.classes());

    bundle.unseen.features = read_matrix(resolve("unseen_features"));
    bundle.A_t.vectors = read_matrix(resolve("unseen_semantics")).transpose();
    bundle.unseen.num_classes = static_cast<int>(bundle.A_t.classes());
    if (manifest.has("unseen_labels")) bundle.unseen.labels = read_labels(resolve("unseen_labels"));

    if (manifest.has("l2_normalize_rows") &&
        parse_bool(manifest.at("l2_normalize_rows"), "l2_normalize_rows")) {
        l2_normalize(bundle.seen.features);
        l2_normalize(bundle.unseen.features);
    }

    ValidationReport report = validate_pair(bundle.seen, bundle.A_s);
    for (const auto& v : validate_pair(bundle.unseen, bundle.A_t).violations)
        report.violations.push_back("unseen: " + v);
    if (bundle.seen.dim() != bundle.unseen.dim())
        report.violations.push_back("seen and unseen feature dimensions disagree");
    if (bundle.A_s.dim() != bundle.A_t.dim())
        report.violations.push_back("seen and unseen semantic dimensions disagree");
    if (!report.ok()) throw std::runtime_error(manifest_path + ": " + report.to_string());
    return bundle;
}

}  // namespace zsl
