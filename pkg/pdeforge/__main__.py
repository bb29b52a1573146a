from pdeforge.cli import run

run()
