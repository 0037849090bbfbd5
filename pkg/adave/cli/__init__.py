# adave/cli/__init__.py
