"""Glasgow prototype with 25 ppm arm loss and an unbalanced main beamsplitter."""
from _common import run

DOC = {
    "preset": "glasgow",
    "base": {"arms": {"T_loss_ppm": 25}},
    "sweep": {"parameter": "eta_bs", "values": [0, 0.001, 0.005, 0.01, 0.05]},
    "references": ["sql", "sagnac", "michelson"],
    "output_prefix": "results/bs_asymmetry/glasgow_eta",
}

if __name__ == "__main__":
    run(DOC, __doc__)
