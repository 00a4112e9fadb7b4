#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace rom {

struct SourceLoc {
    int file = -1;
    int line = 0;
    int col = 0;

    friend auto operator<=>(const SourceLoc&, const SourceLoc&) = default;
};

struct SourceFile {
    std::string path;
    std::string text;
};

/// Owns every source buffer of a program. Token text views point into these
/// buffers, so the manager must outlive any token sequence or syntax tree.
class SourceManager {
public:
    int add(std::string path, std::string text);
    int load(const std::string& path);  // throws std::runtime_error on I/O failure

    const SourceFile& file(int id) const { return *files_.at(static_cast<size_t>(id)); }
    std::string_view path(int id) const;
    size_t size() const { return files_.size(); }

private:
    std::vector<std::unique_ptr<SourceFile>> files_;
};

}  // namespace rom
