# :coding: utf-8

import smtflow.command_line


def main():
    """Execute main command line interface passing command line arguments."""
    smtflow.command_line.main(prog_name="smtflow")


if __name__ == "__main__":
    main()
