"""Main application entry point."""

import logging
import sys

import uvicorn

from src.config import settings

logger = logging.getLogger(__name__)


def serve_api() -> None:
    """Run the FastAPI app under uvicorn until interrupted."""
    from src.server import app

    logger.info(f"API server: http://{settings.server_host}:{settings.server_port}")
    try:
        config = uvicorn.Config(
            app,
            host=settings.server_host,
            port=settings.server_port,
            log_level=settings.log_level.lower(),
        )
        server = uvicorn.Server(config)
        server.run()
    except KeyboardInterrupt:
        logger.info("Received keyboard interrupt")
    except Exception as e:
        logger.error(f"Application error: {e}", exc_info=True)
        sys.exit(1)
    finally:
        logger.info("Application shutdown complete")


def main() -> None:
    """Console script entry point."""
    from src.cli import run

    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
