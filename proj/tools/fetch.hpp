#pragma once

#include <string>

namespace klsnmf::tools {

struct FetchRequest {
    std::string name = "semeion";
    std::string url;       // default filled per name
    std::string out_dir = ".";
    std::string expected_sha256;  // empty: report only
    bool keep_raw = false;
};

/// Downloads the named dataset, verifies the checksum when one is given,
/// converts it to the dense text layout and writes a manifest next to it.
/// Returns the path of the converted data file.
std::string fetch_dataset(const FetchRequest& request);

std::string sha256_hex(const std::string& bytes);

}  // namespace klsnmf::tools
