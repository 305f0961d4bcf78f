#pragma once

#include <map>
#include <string>
#include <vector>

#include "zsl/types.hpp"

namespace zsl {

// Text matrix format: header line "R C", then R rows of C whitespace-
// separated decimals. '#' starts a comment line. Values are printed with 17
// significant digits so write/read round-trips are exact. Parse errors name
// the offending line.
Matrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Matrix& m);

// Labels: one 0-based integer per line; '#' comments allowed.
std::vector<int> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<int>& labels);

// Flat "key = value" manifest, one entry per line, '#' comments.
struct Manifest {
    std::map<std::string, std::string> entries;

    bool has(const std::string& key) const { return entries.count(key) != 0; }
    const std::string& at(const std::string& key) const;
};

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& manifest);

// Loads the split a manifest describes. Relative paths resolve against the
// manifest's directory. Keys: seen_features, seen_labels, seen_semantics or
// seen_instance_attributes, unseen_features, unseen_semantics, optional
// unseen_labels, optional l2_normalize_rows (true/false). Dimensional
// consistency is validated on load.
Bundle load_bundle(const std::string& manifest_path);

// Per-class mean of instance-level attribute rows -> class semantic columns.
SemanticMatrix class_semantics_from_instance_attributes(const Matrix& instance_attrs,
                                                        const std::vector<int>& labels);

}  // namespace zsl
