"""
Configuration for the monomorphism-category toolkit.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
env_path = Path(__file__).parent.parent / '.env'
load_dotenv(dotenv_path=env_path)

# Randomised searches (isomorphism witnesses, decomposition splitting elements)
DEFAULT_SEED = int(os.getenv("MONCAT_SEED", "20240601"))

# Homological cutoffs
DEFAULT_CUTOFF = int(os.getenv("MONCAT_CUTOFF", "4"))

# Random splitting attempts before a decomposition gives up on a noncommutative top
DECOMPOSITION_TRIALS = int(os.getenv("MONCAT_DECOMPOSITION_TRIALS", "64"))

# Candidate representations the enumeration oracle may visit
ENUMERATION_BUDGET = int(os.getenv("MONCAT_ENUMERATION_BUDGET", "200000"))

# Threads used for panel evaluation
PANEL_WORKERS = int(os.getenv("MONCAT_PANEL_WORKERS", "4"))

# Largest supported prime; keeps int64 matrix products exact
MAX_PRIME = 2 ** 20

# Default output location for reports and oracle directories
OUTPUT_DIR = os.getenv("MONCAT_OUTPUT_DIR", "data/output")
