#include "fetch.hpp"

#include <curl/curl.h>
#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "klsnmf/data.hpp"

namespace klsnmf::tools {

namespace {

const char* kSemeionUrl =
    "https://archive.ics.uci.edu/ml/machine-learning-databases/semeion/semeion.data";

std::size_t append_body(char* data, std::size_t size, std::size_t count, void* sink) {
    static_cast<std::string*>(sink)->append(data, size * count);
    return size * count;
}

std::string download(const std::string& url) {
    CURL* curl = curl_easy_init();
    if (!curl) throw std::runtime_error("fetch: cannot initialize curl");
    std::string body;
    curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, append_body);
    curl_easy_setopt(curl, CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(curl, CURLOPT_CONNECTTIMEOUT, 30L);
    const CURLcode rc = curl_easy_perform(curl);
    curl_easy_cleanup(curl);
    if (rc != CURLE_OK)
        throw std::runtime_error(std::string("fetch: download failed: ") +
                                 curl_easy_strerror(rc));
    return body;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr))
        throw std::runtime_error("fetch: sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string fetch_dataset(const FetchRequest& request) {
    if (request.name != "semeion")
        throw std::runtime_error("fetch: unknown dataset '" + request.name +
                                 "' (available: semeion)");
    const std::string url = request.url.empty() ? kSemeionUrl : request.url;

    const std::string raw = download(url);
    const std::string digest = sha256_hex(raw);
    if (!request.expected_sha256.empty() && digest != request.expected_sha256)
        throw std::runtime_error("fetch: sha256 mismatch: got " + digest +
                                 ", expected " + request.expected_sha256);

    namespace fs = std::filesystem;
    fs::create_directories(request.out_dir);
    if (request.keep_raw) {
        std::ofstream rawfile(fs::path(request.out_dir) / (request.name + ".raw"),
                              std::ios::binary);
        rawfile << raw;
    }

    std::istringstream stream(raw);
    const DataMatrix data = parse_semeion(stream);
    const std::string out_path =
        (fs::path(request.out_dir) / (request.name + ".txt")).string();
    write_dense_matrix(out_path, data);

    std::ofstream manifest(fs::path(request.out_dir) / (request.name + ".manifest"));
    manifest << "name: " << request.name << '\n'
             << "source_url: " << url << '\n'
             << "sha256: " << digest << '\n'
             << "samples: " << data.n() << '\n'
             << "features: " << data.p() << '\n'
             << "classes: " << data.class_count() << '\n';
    return out_path;
}

}  // namespace klsnmf::tools
