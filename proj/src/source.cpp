#include "rom/source.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rom {

int SourceManager::add(std::string path, std::string text) {
    files_.push_back(std::make_unique<SourceFile>(SourceFile{std::move(path), std::move(text)}));
    return static_cast<int>(files_.size() - 1);
}

int SourceManager::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return add(path, ss.str());
}

std::string_view SourceManager::path(int id) const {
    if (id < 0 || static_cast<size_t>(id) >= files_.size()) return "<unknown>";
    return files_[static_cast<size_t>(id)]->path;
}

}  // namespace rom
