import os
import subprocess as sp

MAJOR = 0
MINOR = 1
MICRO = 0
ISRELEASED = False
VERSION = '%d.%d.%d' % (MAJOR, MINOR, MICRO)

_PKG_DIR = os.path.dirname(os.path.abspath(__file__))
_VERSION_FILE = os.path.join(_PKG_DIR, "_version.txt")

def _git(*args: str) -> str:
    # run git in the repository root with a minimal environment, "Unknown" if
    # git is missing
    env = {k: os.environ[k] for k in ("SYSTEMROOT", "PATH", "HOME") if k in os.environ}
    env.update({"LANGUAGE": "C", "LANG": "C", "LC_ALL": "C"})
    try:
        out = sp.Popen(["git", *args], stdout=sp.PIPE, stderr=sp.PIPE, env=env,
                       cwd=os.path.join(_PKG_DIR, "..")).communicate()[0]
    except OSError:
        return "Unknown"
    return out.strip().decode("ascii") or "Unknown"

def _dev_suffix() -> str:
    # ".dev<commit count><short revision as a fixed-width decimal>"
    nshort = 7
    rev = _git("rev-parse", "HEAD")[:nshort]
    count = _git("rev-list", "--count", "HEAD")
    try:
        rev_num = int(rev, 16)
    except ValueError:
        return ".dev0"
    width = len(str(int("f" * nshort, 16)))
    return f".dev{count}{rev_num:0{width}d}"

def get_version() -> str:
    if os.path.exists(_VERSION_FILE):
        with open(_VERSION_FILE, "r") as f:
            return f.read().strip()

    version = VERSION if ISRELEASED else VERSION + _dev_suffix()
    with open(_VERSION_FILE, "w") as f:
        f.write(version)
    return version

if __name__ == "__main__":
    print(get_version())
