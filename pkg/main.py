"""Main entry point for the community detection CLI"""
import logging
import os
import sys

from dotenv import load_dotenv

load_dotenv()

# Configure logging
logging.basicConfig(
    level=os.getenv("HSGN_LOG_LEVEL", "INFO").upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler(os.getenv("HSGN_LOG_FILE", "hsgn.log")),
        logging.StreamHandler()
    ]
)

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
