// Writes the bundled synthetic paired dataset (records + one image per id).
//
//   gen_synthetic <out-dir> [--samples N] [--classes K] [--seed S] [--image-size W]

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dualcascade/records.hpp"
#include "dualcascade/synthetic.hpp"

namespace fs = std::filesystem;
using namespace dualcascade;

int main(int argc, char** argv) {
    CLI::App app{"Generate a deterministic synthetic paired dataset"};
    std::string out_dir;
    synthetic::PairSpec spec;
    int image_size = 16;
    app.add_option("out", out_dir, "Output directory")->required();
    app.add_option("--samples", spec.samples, "Number of samples")->capture_default_str();
    app.add_option("--classes", spec.classes, "Number of classes")->capture_default_str();
    app.add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
    app.add_option("--image-size", image_size, "Side of the square images (0 = no images)")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const auto [a, b] = synthetic::make_pair(spec);
    fs::create_directories(out_dir);
    {
        std::ofstream fa(fs::path(out_dir) / "model_a.jsonl");
        write_prediction_records(fa, a);
        std::ofstream fb(fs::path(out_dir) / "model_b.jsonl");
        write_prediction_records(fb, b);
    }
    if (image_size > 0) {
        const auto dir = fs::path(out_dir) / "images";
        fs::create_directories(dir);
        synthetic::SplitMix64 rng(spec.seed ^ 0x1234567ULL);
        for (const auto& r : a) {
            save_image_file((dir / (r.id + ".pgm")).string(), synthetic::random_image(rng, image_size, image_size));
        }
    }
    std::cout << "wrote " << a.size() << " samples to " << out_dir << '\n';
    return 0;
}
