from __future__ import annotations

import logging
import os
import sys
from typing import Mapping, Sequence

from cli.commands import dispatch
from cli.config import parse_and_validate
from common.errors import ClusterCoopError, ConfigValidationError
from observability.metrics import export_metrics

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_IO = 3

logger = logging.getLogger("clustercoop")


def main(argv: Sequence[str] | None = None, environ: Mapping[str, str] | None = None) -> int:
    try:
        run = parse_and_validate(argv, os.environ if environ is None else environ)
    except ConfigValidationError as exc:
        print(f"error [{exc.stage}] {exc.key}: {exc.message}", file=sys.stderr)
        return EXIT_VALIDATION

    logging.basicConfig(level=run.log_level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        status = dispatch(run)
        if run.metrics_path:
            export_metrics(run.metrics_path)
    except ClusterCoopError as exc:
        logger.error("%s failed in stage %s: %s", run.command, exc.stage, exc)
        print(f"error [{exc.stage}] {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        logger.error("%s could not write results: %s", run.command, exc)
        print(f"error [io] {exc}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
