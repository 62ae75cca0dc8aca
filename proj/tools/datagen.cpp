// Writes a deterministic 2-D Gaussian-blobs dataset in the sparse text format.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "alphaseed/dataset.hpp"
#include "alphaseed/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"synthetic blobs dataset generator"};

    alphaseed::BlobsSpec spec;
    std::string out_path;
    app.add_option("--n", spec.n, "number of instances")->check(CLI::PositiveNumber);
    app.add_option("--seed", spec.seed, "RNG seed");
    app.add_option("--center", spec.center_x, "class centers at (+-center, 0)");
    app.add_option("--sigma", spec.sigma, "per-class standard deviation");
    app.add_option("--out", out_path, "output file (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    const std::string text = alphaseed::serialize_dataset(alphaseed::make_blobs(spec));
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot open " << out_path << " for writing\n";
            return 3;
        }
        out << text;
    }
    return 0;
}
