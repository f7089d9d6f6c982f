#pragma once

#include <string>
#include <vector>

#include "comds/types.hpp"

namespace comds {

struct NamedMatrix {
    std::vector<std::string> ids;
    std::vector<std::string> columns;
    Matrix values;
};

// Embedding CSV: header "id,<col>,<col>,..."; one row per sample, numeric
// cells, '.' decimal separator, UTF-8. Parse errors carry file, line and
// column. Values are printed with 17 significant digits so a write/read
// round trip is exact.
NamedMatrix read_embedding_csv(const std::string& path);
void write_embedding_csv(const std::string& path, const NamedMatrix& m);

// Distance CSV: header "id,<id>,...", then an n x (n+1) grid whose first
// cell repeats the row id.
struct NamedDistances {
    std::vector<std::string> ids;
    DistanceMatrix distances;
};
NamedDistances read_distance_csv(const std::string& path);
void write_distance_csv(const std::string& path, const NamedDistances& d);

// All writers go through a temp file in the destination directory plus an
// atomic rename, so readers never observe partial output.
void atomic_write_text(const std::string& path, const std::string& content);

std::string format_double(double v);  // %.17g

}  // namespace comds
