"""Compare the three GA presets on the espresso-machine network.

The exploration preset keeps a large, noisy population; exploitation is a
small greedy one; balanced sits in between. The convergence curve lists
(unique orders evaluated, best score) at every improvement.
"""

from dsmseq import build_adjacency, bundled_case, preset_config, run_ga, score_sequence


def main():
    case = bundled_case("espresso_machine_13")
    matrix = build_adjacency(case)
    print(f"{case.n} nodes, {len(case.edges)} edges")
    print()

    for preset in ("exploration", "balanced", "exploitation"):
        config = preset_config(preset, generations=400, seed=7)
        best, convergence = run_ga(matrix, config)
        assert best.score == score_sequence(matrix, best.sequence)
        print(
            f"{preset:<13} best {best.score:>2} "
            f"after {convergence[-1][0]:>5} unique orders "
            f"(population {config.population_size}, swap prob {config.indpb})"
        )

    print()
    config = preset_config("balanced", generations=400, seed=7)
    _, convergence = run_ga(matrix, config)
    print("balanced preset, improvements over the run:")
    for unique_count, best_score in convergence:
        print(f"  {unique_count:>5} evaluated -> best {best_score}")


if __name__ == "__main__":
    main()
