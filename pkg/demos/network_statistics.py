"""Print size and shape statistics for every bundled case."""

from dsmseq import bundled_case, bundled_case_names, network_metrics


def main():
    header = f"{'case':<22} {'n':>3} {'e':>3} {'density':>8} {'avg deg':>8} {'diam':>5} {'clust':>6} {'path':>6}"
    print(header)
    print("-" * len(header))
    for name in bundled_case_names():
        m = network_metrics(bundled_case(name))
        note = "" if m.connected else "  (largest component)"
        print(
            f"{name:<22} {m.n:>3} {m.e:>3} {m.density:>8.3f} {m.average_degree:>8.3f} "
            f"{m.diameter:>5} {m.clustering_coefficient:>6.3f} {m.average_path_length:>6.3f}{note}"
        )


if __name__ == "__main__":
    main()
