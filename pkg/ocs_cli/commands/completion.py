import rich_click as click

PROG_NAME = "ocs"
SHELL_SNIPPETS = {
    "bash": ("# Add the following to your .bashrc or .bash_profile:", 'eval "$(_{var}_COMPLETE=bash_source {prog})"'),
    "zsh": ("# Add the following to your .zshrc:", 'eval "$(_{var}_COMPLETE=zsh_source {prog})"'),
    "fish": ("# Add the following to your config.fish:", "_{var}_COMPLETE=fish_source {prog} | source"),
}


@click.command()
@click.argument("shell", type=click.Choice(sorted(SHELL_SNIPPETS)))
def completion(shell: str):
    """Show the shell completion setup instructions."""
    comment, line = SHELL_SNIPPETS[shell]
    click.echo(comment)
    click.echo(line.format(var=PROG_NAME.upper().replace("-", "_"), prog=PROG_NAME))
