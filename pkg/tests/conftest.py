import sys
from pathlib import Path

# allow "import bruteforce" from sibling test modules
sys.path.insert(0, str(Path(__file__).parent))
