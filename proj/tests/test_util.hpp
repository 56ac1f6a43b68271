#pragma once

#include <fstream>
#include <sstream>
#include <string>

#ifndef GQKIT_DATA_DIR
#error "GQKIT_DATA_DIR must point at the repository data directory"
#endif

inline std::string data_path(const std::string& rel) {
    return std::string(GQKIT_DATA_DIR) + "/" + rel;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
