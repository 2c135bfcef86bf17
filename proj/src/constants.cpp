#include "rdv/constants.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rdv {

void validate(const PhysicalConstants& k) {
    if (!(k.mu > 0.0) || !(k.j2 > 0.0) || !(k.re > 0.0)) {
        throw std::invalid_argument("physical constants must all be strictly positive");
    }
}

PhysicalConstants load_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open constants file: " + path);
    }
    PhysicalConstants k;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (auto& c : line) {
            if (c == '=') c = ' ';
        }
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;  // blank line
        double value = 0.0;
        if (!(ls >> value)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing value for key '" + key + "'");
        }
        if (key == "mu") k.mu = value;
        else if (key == "j2") k.j2 = value;
        else if (key == "re") k.re = value;
        else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    validate(k);
    return k;
}

}  // namespace rdv
