"""Train a shrunk window regressor end to end in under a minute.

The full-size models need a real epoch budget; a width-scaled one on a tiny
corpus shows the whole loop - loss drop, scheduler, checkpoint round trip.

Run me:  python3 demos/05_tiny_training.py
"""
import tempfile
from pathlib import Path

import numpy as np

from doorimu.nn import (TrainConfig, build_gyro_model, load_checkpoint,
                        param_count, predict, save_checkpoint, train)
from doorimu.pipeline import (load_manifest, load_manifest_session,
                              make_windows, preprocess_session,
                              window_matrices)
from doorimu.simulate import CorpusConfig, generate_corpus

work = Path(tempfile.mkdtemp(prefix="doorimu_demo_"))
cfg = CorpusConfig(n_sessions=4, session_duration=60.0,
                   val_sessions=1, test_sessions=1, seed=2)
manifest_path = generate_corpus(cfg, work)
manifest = load_manifest(manifest_path)

splits = {"train": [], "val": []}
for entry in manifest["sessions"]:
    if entry["role"] == "test":
        continue
    pre = preprocess_session(load_manifest_session(manifest_path, entry))
    splits[entry["role"]].append(window_matrices(make_windows(pre.session)))
stack = lambda role, i: np.concatenate([m[i] for m in splits[role]])

model = build_gyro_model(seed=0, width_scale=0.05)
print(f"gyro-only model, width x0.05: {param_count(model):,} parameters")

config = TrainConfig(epochs=6, batch_size=64, lr=3e-3, seed=0)
result, optimizer = train(
    model, stack("train", 0), stack("train", 2),
    stack("val", 0), stack("val", 2), config,
    log=lambda e, tr, vl, lr: print(
        f"epoch {e + 1}: train {tr:.4f} val {vl:.4f} lr {lr:.0e}"),
)
assert result.train_loss[-1] < result.train_loss[0], "loss should drop"

# Checkpoints hold the exact float64 parameters: save, reload, same outputs.
ckpt = work / "tiny.ckpt"
save_checkpoint(ckpt, model, seed=0, epoch=result.epochs_run, optimizer=optimizer)
clone, header, _ = load_checkpoint(ckpt)
probe = stack("val", 0)[:32]
same = np.array_equal(predict(model, probe), predict(clone, probe))
print(f"checkpoint round trip at epoch {header['epoch']}: "
      f"outputs bitwise identical = {same}")
