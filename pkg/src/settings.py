import os
from dotenv import load_dotenv

# Load environment variables once
load_dotenv()

RUNS_DIR = os.getenv("BVAR_RUNS_DIR", "runs")
DEFAULT_THREADS = int(os.getenv("BVAR_THREADS", "1"))
LOG_LEVEL = os.getenv("BVAR_LOG_LEVEL", "INFO").upper()
SHOW_PROGRESS = os.getenv("BVAR_PROGRESS", "true").lower() == "true"

# Progress records are logged every this many iterations
LOG_EVERY = int(os.getenv("BVAR_LOG_EVERY", "500"))
