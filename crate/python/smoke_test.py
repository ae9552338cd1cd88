"""Smoke test for the compiled `versal` extension.

Build and run from the repository root:

    cargo build --release -p versal-py --features extension-module
    cp target/release/libversal.so python/versal.so
    python3 python/smoke_test.py
"""

import json
import sys

import versal


def main():
    pt = versal.finite_field_point(3, 1, 2)
    ok, failed = versal.verify_point(pt)
    assert ok and not failed, failed

    bad = json.loads(pt)
    bad["h"][1] = [1, 1]
    ok, failed = versal.verify_point(json.dumps(bad))
    assert not ok

    assert len(json.loads(versal.root_data(1))) == 3
    assert versal.hom_class_count("Z2", "S3") == 2
    assert versal.twist_fingerprint("sl3", 2, 1, 2, "flip") == (216, 3, 4, True)

    try:
        versal.twist_fingerprint("sl3", 3, 1, 2)
    except versal.SizeLimitError:
        pass
    else:
        raise AssertionError("expected a size cutoff")

    fps = versal.verify_catalog(versal.catalog(1, 3))
    assert len(fps) == 4, fps
    print("smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
