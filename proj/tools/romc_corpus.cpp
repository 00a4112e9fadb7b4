#include "rom/driver.hpp"

#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: romc-corpus <corpus-dir>\n";
        return 64;
    }
    if (!std::filesystem::is_directory(argv[1])) {
        std::cerr << "romc-corpus: " << argv[1] << " is not a directory\n";
        return 64;
    }
    int failed = 0, passed = 0;
    for (const auto& path : rom::find_corpus_programs(argv[1])) {
        rom::CorpusCase c = rom::load_corpus_case(path);
        if (!c.error.empty()) {
            std::cout << "ERROR " << path << ": " << c.error << "\n";
            ++failed;
            continue;
        }
        std::string actual;
        try {
            actual = rom::corpus_actual(path, c.mode);
        } catch (const std::exception& e) {
            std::cout << "ERROR " << path << ": " << e.what() << "\n";
            ++failed;
            continue;
        }
        if (actual == c.expected) {
            std::cout << "ok   " << path << "\n";
            ++passed;
        } else {
            std::cout << "FAIL " << path << " (" << c.mode << ")\n" << rom::line_diff(c.expected, actual);
            ++failed;
        }
    }
    std::cout << passed << " passed, " << failed << " failed\n";
    return failed ? 1 : 0;
}
