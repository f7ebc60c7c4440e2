#include "ssnmf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace ssnmf {

namespace {

using Index = Eigen::Index;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

}  // namespace

Matrix parse_csv(std::istream& in, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        for (std::size_t col = 1;; ++col) {
            const std::size_t comma = body.find(',', start);
            const std::string_view cell =
                trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            const auto where = [&] {
                return source + ":" + std::to_string(line_no) + ":" + std::to_string(col) + ": ";
            };
            double value = 0.0;
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            if (!cell.empty() && *begin == '+') ++begin;
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (cell.empty() || ec != std::errc() || ptr != end) {
                throw ParseError(where() + "cannot parse '" + std::string(cell) + "' as a number");
            }
            if (!std::isfinite(value)) throw ParseError(where() + "non-finite value '" + std::string(cell) + "'");
            row.push_back(value);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DimensionMismatch(source + ":" + std::to_string(line_no) + ": expected " +
                                    std::to_string(rows.front().size()) + " values, found " +
                                    std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(source + ": no data");

    Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) M(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    return M;
}

Matrix read_csv(const std::string& path) {
    auto in = open_in(path);
    return parse_csv(in, path);
}

void print_csv(std::ostream& out, const Matrix& M) {
    char buf[32];
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j > 0) out << ',';
            const int len = std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
            out.write(buf, len);
        }
        out << '\n';
    }
}

void write_csv(const std::string& path, const Matrix& M) {
    auto out = open_out(path);
    print_csv(out, M);
    if (!out) throw IoError("failed writing " + path);
}

void write_pgm(const std::string& path, const GrayImage& image) {
    if (image.pixels.size() != image.width * image.height || image.pixels.empty()) {
        throw GeometryMismatch("image is " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                               " but has " + std::to_string(image.pixels.size()) + " pixels");
    }
    const auto [lo_it, hi_it] = std::minmax_element(image.pixels.begin(), image.pixels.end());
    const double lo = *lo_it, hi = *hi_it;
    std::string bytes(image.pixels.size(), '\0');
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        double level;
        if (hi > lo) {
            level = std::round(255.0 * (image.pixels[i] - lo) / (hi - lo));
        } else {
            level = hi == 0.0 ? 0.0 : 255.0;
        }
        bytes[i] = static_cast<char>(static_cast<unsigned char>(level));
    }
    auto out = open_out(path, std::ios::binary);
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path);
}

GrayImage read_pgm(const std::string& path) {
    auto in = open_in(path, std::ios::binary);
    const auto token = [&]() -> std::string {
        std::string t;
        char c;
        while (in.get(c)) {
            if (c == '#') {
                std::string skip;
                std::getline(in, skip);
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                t.push_back(c);
                break;
            }
        }
        while (in.get(c) && !std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
        return t;
    };
    const auto number = [&](const char* what) {
        const std::string t = token();
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
            throw ParseError(path + ": bad PGM " + what + " '" + t + "'");
        }
        return v;
    };

    const std::string magic = token();
    if (magic != "P5" && magic != "P2") throw ParseError(path + ": not a PGM file (magic '" + magic + "')");
    GrayImage image;
    image.width = number("width");
    image.height = number("height");
    const std::size_t maxval = number("maxval");
    if (maxval < 1 || maxval > 65535) throw ParseError(path + ": PGM maxval out of range");
    const std::size_t count = image.width * image.height;
    image.pixels.resize(count);

    if (magic == "P2") {
        for (std::size_t i = 0; i < count; ++i) image.pixels[i] = static_cast<double>(number("pixel"));
        return image;
    }
    const std::size_t depth = maxval < 256 ? 1 : 2;
    std::string bytes(count * depth, '\0');
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) throw ParseError(path + ": truncated PGM data");
    for (std::size_t i = 0; i < count; ++i) {
        const auto hi = static_cast<unsigned char>(bytes[i * depth]);
        image.pixels[i] = depth == 1 ? hi : hi * 256.0 + static_cast<unsigned char>(bytes[i * depth + 1]);
    }
    return image;
}

SetCoverInstance parse_setcover_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    const auto positive_int = [](const nlohmann::json& v, const std::string& what) {
        if (!v.is_number_integer() || v.get<long long>() < 0) throw SchemaError(what + " must be a nonnegative integer");
        return v.get<std::size_t>();
    };
    if (!doc.is_object()) throw SchemaError("top level must be an object");
    for (const char* key : {"n", "subsets", "K"}) {
        if (!doc.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    }
    SetCoverInstance inst;
    inst.n = positive_int(doc["n"], "n");
    inst.K = positive_int(doc["K"], "K");
    if (!doc["subsets"].is_array()) throw SchemaError("subsets must be an array of arrays");
    for (const auto& subset : doc["subsets"]) {
        if (!subset.is_array()) throw SchemaError("subsets must be an array of arrays");
        std::vector<std::size_t> elements;
        for (const auto& e : subset) elements.push_back(positive_int(e, "subset element"));
        inst.subsets.push_back(std::move(elements));
    }
    inst.validate();
    return inst;
}

SetCoverInstance read_setcover_json(const std::string& path) {
    auto in = open_in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_setcover_json(text.str());
}

void write_index_file(const std::string& path, const IndexSet& J) {
    auto out = open_out(path);
    for (std::size_t j : J) out << j << '\n';
    if (!out) throw IoError("failed writing " + path);
}

IndexSet read_index_file(const std::string& path) {
    auto in = open_in(path);
    IndexSet J;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc() || ptr != body.data() + body.size()) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": bad index '" + std::string(body) + "'");
        }
        J.push_back(v);
    }
    return J;
}

}  // namespace ssnmf
