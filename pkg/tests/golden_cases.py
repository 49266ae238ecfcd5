"""Golden CLI cases on A1 and A1+H; shared by the tests and ``tests/golden/regen.py``."""

from pathlib import Path

GOLDEN = Path(__file__).parent / "golden"
INPUTS = GOLDEN / "inputs"

A1 = "a1.json"
A1H = "a1_plus_h.json"

# name -> argv, with input file names relative to INPUTS
CASES = {
    "lattice_info_a1": ["lattice-info", A1],
    "lattice_info_a1h": ["lattice-info", A1H],
    "disc_a1": ["disc", A1],
    "disc_a1h": ["disc", A1H, "--torsion", "2"],
    "weilrep_S_a1": ["weilrep", A1, "--gen", "S"],
    "weilrep_T_a1": ["weilrep", A1, "--gen", "T"],
    "weilrep_Z_a1h": ["weilrep", A1H, "--gen", "Z"],
    "weilrep_word_a1h": ["weilrep", A1H, "--word", "STTs"],
    "weilrep_bad_word_a1": ["weilrep", A1, "--word", "S T^2"],
    "weilrep_matrix_a1": ["weilrep", A1, "--matrix", "2,1,1,1"],
    "weilrep_congruence_a1": ["weilrep", A1, "--check-congruence", "4", "--samples", "10", "--seed", "7"],
    "weilrep_congruence_a1h": ["weilrep", A1H, "--check-congruence", "4", "--samples", "10", "--seed", "7"],
    "theta_a1": ["theta", A1, "--bound", "6"],
    "theta_coset_a1": ["theta", A1, "--bound", "6", "--coset", "1"],
    "theta_a1h": ["theta", A1H, "--bound", "6"],
    "siegel_theta_a1": ["siegel-theta", A1, "--tau", "0.1,1.1", "--z-basis", "z_a1.json", "--eps", "1e-10"],
    "siegel_theta_a1h": ["siegel-theta", A1H, "--tau", "0.1,1.1", "--z-basis", "z_a1h.json", "--eps", "1e-10"],
    "arrows_up_a1": ["arrows", A1, "--sublattice", "sub_a1.json", "--up", "--table", "table_a1.json"],
    "arrows_down_a1": ["arrows", A1, "--sublattice", "sub_a1.json", "--down", "--table", "table_a1_sub.json"],
    "arrows_up_a1h": ["arrows", A1H, "--sublattice", "sub_a1h.json", "--up", "--table", "table_a1h.json"],
    "arrows_down_a1h": ["arrows", A1H, "--sublattice", "sub_a1h.json", "--down", "--table", "table_a1h_sub.json"],
    "eisenstein_a1": ["eisenstein", A1, "--coset", "0", "--weight", "1/2", "--s", "2", "--tau", "0.1,1.2", "--cutoff", "10"],
    "eisenstein_a1h": [
        "eisenstein", A1H, "--coset", "0", "--weight", "1/2", "--s", "2,0.5", "--tau", "0.1,1.2",
        "--cutoff", "10", "--laplacian", "1e-3",
    ],
    "lseries_a1": ["lseries", "--table", "table_a1.json", "--coset", "0", "--t", "1", "--s", "3", "--nmax", "2", "--isolate", "1"],
    "lseries_a1h": [
        "lseries", "--table", "table_a1h.json", "--coset", "1", "--t", "1/4", "--s", "3,1",
        "--coprime-to", "6", "--nmax", "10",
    ],
    "split_represent_a1h": ["split-represent", A1H, "--coset", "1,0,0", "--n", "1/4"],
    "split_represent_a1h_zero": ["split-represent", A1H, "--k-rank", "1", "--coset", "0", "--n", "3"],
    "split_represent_a1": ["split-represent", A1, "--coset", "1", "--n", "1/4"],
}


def resolve(argv):
    """Prefix input file names with the inputs directory."""
    out = []
    for a in argv:
        out.append(str(INPUTS / a) if a.endswith(".json") else a)
    return out
