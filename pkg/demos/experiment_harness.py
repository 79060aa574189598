"""Run a small experiment from a config and write its CSV rows and JSON summary.

Usage: python3 demos/experiment_harness.py [out_dir]
"""
import sys

from graphonlab.experiments import ExperimentConfig, run_experiment

cfg = ExperimentConfig("pullback_convergence", sizes=[16, 32, 64], trials=10, seed=1,
                       params={"k": 3, "m": 1, "steps": 4, "digraphon_seed": 7})
print(cfg.to_json())
rep = run_experiment(cfg)
print(rep.summary_json())
print("verdicts:", rep.verdicts)
if len(sys.argv) > 1:
    for path in rep.write(sys.argv[1]):
        print("wrote", path)
