from patdist.cli import main

main()
